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

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "ssd/config.hpp"
#include "ssd/mini_page.hpp"

namespace reis::engine {

/// Coarse-phase Temporal Top List entry.
struct TtlEntryC {
  std::uint16_t dist = 0;
  std::vector<std::uint8_t> emb;
  ssd::MiniPageAddress eadr;
  std::uint8_t tag = 0;
};

/// Fine-phase Temporal Top List entry.
struct TtlEntryE {
  std::uint16_t dist = 0;
  std::vector<std::uint8_t> emb;
  std::uint32_t radr = 0;
  std::uint32_t dadr = 0;
};

/// Bytes moved over the channel per entry.
constexpr std::uint32_t wire_bytes_c(std::uint32_t emb_bytes) { return 2 + emb_bytes + 5 + 1; }
constexpr std::uint32_t wire_bytes_e(std::uint32_t emb_bytes) { return 2 + emb_bytes + 4 + 4; }

/// Strict total orders used for selection. Fine entries share the binary slot
/// order through radr, which equals the slot position.
struct ByDistEadr {
  bool operator()(const TtlEntryC& a, const TtlEntryC& b) const {
    return a.dist != b.dist ? a.dist < b.dist : a.eadr < b.eadr;
  }
};
struct ByDistRadr {
  bool operator()(const TtlEntryE& a, const TtlEntryE& b) const {
    return a.dist != b.dist ? a.dist < b.dist : a.radr < b.radr;
  }
};

/// Keeps the m smallest entries of `entries` under `less`, in unspecified order.
template <class T, class Less>
void quickselect_smallest(std::vector<T>& entries, std::size_t m, Less less) {
  if (m >= entries.size()) return;
  if (m == 0) {
    entries.clear();
    return;
  }
  std::nth_element(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(m - 1),
                   entries.end(), less);
  entries.resize(m);
}

template <class T, class Less>
void quicksort(std::span<T> entries, Less less) {
  std::sort(entries.begin(), entries.end(), less);
}

/// Core time for selecting over `n` entries: n / throughput.
ssd::Nanos select_time(std::uint64_t n, const ssd::TimingParams& t);
/// Core time for sorting `n` entries: n log2 n / throughput.
ssd::Nanos sort_time(std::uint64_t n, const ssd::TimingParams& t);

}  // namespace reis::engine
