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

#include <span>
#include <vector>

#include "ssd/config.hpp"

namespace reis::engine {

using ssd::Nanos;

/// Per-stage latency of one search.
struct StageTimes {
  Nanos ibc = 0;
  Nanos scan = 0;      // sense + XOR + fail-bit count
  Nanos transfer = 0;  // TTL entries over the channels
  Nanos select = 0;    // quickselect and DRAM staging on the embedded core
  Nanos rerank = 0;
  Nanos doc_fetch = 0;

  Nanos total() const { return ibc + scan + transfer + select + rerank + doc_fetch; }
  StageTimes& operator+=(const StageTimes& o);
  friend bool operator==(const StageTimes&, const StageTimes&) = default;
};

/// Cost of one lock-step iteration: every plane handles its next page.
struct IterationCost {
  Nanos array = 0;     // max over planes of sense + XOR + count
  Nanos sense = 0;     // max over planes of sense + XOR
  Nanos count = 0;     // max over planes of fail-bit counting
  Nanos transfer = 0;  // max over channels
  Nanos select = 0;
};

/// Scan-phase latency. Without pipelining the stages of every iteration run
/// back to back. With pipelining iteration i+1 may sense while iteration i
/// transfers and selects (a flow shop); `overlap_count` also lets counting
/// overlap the next sense. The returned stages are the critical path, so
/// they add up to the phase makespan.
StageTimes phase_latency(std::span<const IterationCost> iterations, bool pipelined,
                         bool overlap_count);

/// Makespan of a permutation flow shop with processing times p[i][s].
/// `attributed[s]` receives the share of stage s on one critical path.
Nanos flow_shop(const std::vector<std::vector<Nanos>>& p, std::vector<Nanos>& attributed);

}  // namespace reis::engine
