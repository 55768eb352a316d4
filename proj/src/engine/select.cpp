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

#include "engine/select.hpp"

#include <cmath>

namespace reis::engine {

ssd::Nanos select_time(std::uint64_t n, const ssd::TimingParams& t) {
  return static_cast<ssd::Nanos>(
      std::llround(static_cast<double>(n) * 1000.0 / t.core_select_throughput));
}

ssd::Nanos sort_time(std::uint64_t n, const ssd::TimingParams& t) {
  if (n < 2) return select_time(n, t);
  const double ops = static_cast<double>(n) * std::log2(static_cast<double>(n));
  return static_cast<ssd::Nanos>(std::llround(ops * 1000.0 / t.core_select_throughput));
}

}  // namespace reis::engine
