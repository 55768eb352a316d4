// Copyright 2026-present the reis-sim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace reis::engine {

/// Host-visible commands, in the vendor-specific opcode range.
enum class ApiCommand : std::uint8_t {
  kDbDeploy = 0x80,
  kIvfDeploy = 0x81,
  kSearch = 0x82,
  kIvfSearch = 0x83,
};

/// NAND flash command extensions issued by the controller.
enum class FlashCommand : std::uint8_t {
  kIbc = 0xB0,      // IBC Q_EMB: copy the query into every page buffer
  kXor = 0xB1,      // XOR ADR_P: sense a page and XOR it with the cache latch
  kGenDist = 0xB2,  // GEN_DIST EADR: fail-bit count per Mini-Page
  kRdTtl = 0xB3,    // RD_TTL EADR: move passing entries to the TTL
  kRead = 0x00,     // plain page read (rerank and document fetch)
};

std::string_view command_name(ApiCommand c);
std::string_view command_name(FlashCommand c);

enum class Phase : std::uint8_t { kIbc, kCoarse, kFine, kRerank, kDocFetch };
std::string_view phase_name(Phase p);

struct TraceEvent {
  std::uint64_t seq = 0;
  Phase phase = Phase::kIbc;
  FlashCommand command = FlashCommand::kIbc;
  std::uint32_t iteration = 0;
  std::uint32_t channel = 0;
  std::uint32_t plane = 0;
  std::uint64_t page = 0;
  std::uint64_t value = 0;  // slots counted, entries moved, or bytes
  std::int64_t latency_ns = 0;
};

using TraceSink = std::function<void(const TraceEvent&)>;

/// One JSON object, no trailing newline.
std::string to_json_line(const TraceEvent& e);
std::string api_json_line(ApiCommand c, std::uint8_t db_id, std::uint32_t k);

}  // namespace reis::engine
