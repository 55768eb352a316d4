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

#include "engine/trace.hpp"

#include "json.hpp"

namespace reis::engine {

std::string_view command_name(ApiCommand c) {
  switch (c) {
    case ApiCommand::kDbDeploy: return "DB_Deploy";
    case ApiCommand::kIvfDeploy: return "IVF_Deploy";
    case ApiCommand::kSearch: return "Search";
    case ApiCommand::kIvfSearch: return "IVF_Search";
  }
  return "?";
}

std::string_view command_name(FlashCommand c) {
  switch (c) {
    case FlashCommand::kIbc: return "IBC";
    case FlashCommand::kXor: return "XOR";
    case FlashCommand::kGenDist: return "GEN_DIST";
    case FlashCommand::kRdTtl: return "RD_TTL";
    case FlashCommand::kRead: return "READ";
  }
  return "?";
}

std::string_view phase_name(Phase p) {
  switch (p) {
    case Phase::kIbc: return "ibc";
    case Phase::kCoarse: return "coarse";
    case Phase::kFine: return "fine";
    case Phase::kRerank: return "rerank";
    case Phase::kDocFetch: return "doc_fetch";
  }
  return "?";
}

std::string to_json_line(const TraceEvent& e) {
  nlohmann::ordered_json j;
  j["seq"] = e.seq;
  j["phase"] = phase_name(e.phase);
  j["cmd"] = command_name(e.command);
  j["opcode"] = static_cast<int>(e.command);
  j["iter"] = e.iteration;
  j["channel"] = e.channel;
  j["plane"] = e.plane;
  j["page"] = e.page;
  j["value"] = e.value;
  j["latency_ns"] = e.latency_ns;
  return j.dump();
}

std::string api_json_line(ApiCommand c, std::uint8_t db_id, std::uint32_t k) {
  nlohmann::ordered_json j;
  j["api"] = command_name(c);
  j["opcode"] = static_cast<int>(c);
  j["db_id"] = db_id;
  j["k"] = k;
  return j.dump();
}

}  // namespace reis::engine
