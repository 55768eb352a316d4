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

#include "engine/latency_model.hpp"

#include <algorithm>

#include "common/error.hpp"

namespace reis::engine {

StageTimes& StageTimes::operator+=(const StageTimes& o) {
  ibc += o.ibc;
  scan += o.scan;
  transfer += o.transfer;
  select += o.select;
  rerank += o.rerank;
  doc_fetch += o.doc_fetch;
  return *this;
}

Nanos flow_shop(const std::vector<std::vector<Nanos>>& p, std::vector<Nanos>& attributed) {
  if (p.empty()) {
    std::fill(attributed.begin(), attributed.end(), 0);
    return 0;
  }
  const std::size_t n = p.size();
  const std::size_t m = p.front().size();
  REIS_CHECK(m > 0, kInvalidArgument, "flow shop needs at least one stage");
  std::vector<std::vector<Nanos>> c(n, std::vector<Nanos>(m, 0));
  for (std::size_t i = 0; i < n; ++i) {
    REIS_CHECK(p[i].size() == m, kInvalidArgument, "flow shop rows differ in stage count");
    for (std::size_t s = 0; s < m; ++s) {
      const Nanos up = i > 0 ? c[i - 1][s] : 0;
      const Nanos left = s > 0 ? c[i][s - 1] : 0;
      c[i][s] = std::max(up, left) + p[i][s];
    }
  }
  attributed.assign(m, 0);
  std::size_t i = n - 1;
  std::size_t s = m - 1;
  for (;;) {
    attributed[s] += p[i][s];
    if (i == 0 && s == 0) break;
    if (i == 0) {
      --s;
    } else if (s == 0) {
      --i;
    } else if (c[i][s - 1] >= c[i - 1][s]) {
      --s;
    } else {
      --i;
    }
  }
  return c[n - 1][m - 1];
}

StageTimes phase_latency(std::span<const IterationCost> iterations, bool pipelined,
                         bool overlap_count) {
  StageTimes out;
  if (!pipelined) {
    for (const auto& it : iterations) {
      out.scan += it.array;
      out.transfer += it.transfer;
      out.select += it.select;
    }
    return out;
  }
  std::vector<std::vector<Nanos>> p;
  p.reserve(iterations.size());
  for (const auto& it : iterations) {
    if (overlap_count) {
      p.push_back({it.sense, it.count, it.transfer, it.select});
    } else {
      p.push_back({it.array, it.transfer, it.select});
    }
  }
  std::vector<Nanos> attributed(overlap_count ? 4 : 3, 0);
  flow_shop(p, attributed);
  if (overlap_count) {
    out.scan = attributed[0] + attributed[1];
    out.transfer = attributed[2];
    out.select = attributed[3];
  } else {
    out.scan = attributed[0];
    out.transfer = attributed[1];
    out.select = attributed[2];
  }
  return out;
}

}  // namespace reis::engine
