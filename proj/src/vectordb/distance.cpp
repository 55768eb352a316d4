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

#include "vectordb/distance.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

namespace reis::vdb {

namespace {

inline std::uint64_t load64(const std::uint8_t* p) {
  std::uint64_t w;
  std::memcpy(&w, p, sizeof(w));
  return w;
}

}  // namespace

std::uint64_t popcount_bytes(BitView bytes) {
  const std::uint8_t* p = bytes.data();
  const std::size_t n = bytes.size();
  std::uint64_t count = 0;
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) count += std::popcount(load64(p + i));
  for (; i < n; ++i) count += std::popcount(static_cast<unsigned>(p[i]));
  return count;
}

std::uint32_t hamming_distance(BitView a, BitView b) {
  REIS_CHECK(a.size() == b.size(), kDimensionMismatch,
             "hamming_distance: " << a.size() << " vs " << b.size() << " bytes");
  const std::size_t n = a.size();
  std::uint64_t count = 0;
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    count += std::popcount(load64(a.data() + i) ^ load64(b.data() + i));
  }
  for (; i < n; ++i) count += std::popcount(static_cast<unsigned>(a[i] ^ b[i]));
  return static_cast<std::uint32_t>(count);
}

std::uint32_t hamming_distance(const BitVector& a, const BitVector& b) {
  REIS_CHECK(a.dim() == b.dim(), kDimensionMismatch,
             "hamming_distance: D=" << a.dim() << " vs D=" << b.dim());
  return hamming_distance(a.view(), b.view());
}

std::int64_t int8_squared_l2(Int8View a, Int8View b) {
  REIS_CHECK(a.size() == b.size(), kDimensionMismatch,
             "int8_squared_l2: D=" << a.size() << " vs D=" << b.size());
  // Per-block 32-bit partial sums: a block of 4096 terms is at most
  // 4096 * 254^2 < 2^31, so only the block totals need 64 bits.
  std::int64_t total = 0;
  const std::size_t n = a.size();
  for (std::size_t base = 0; base < n; base += 4096) {
    const std::size_t end = std::min(n, base + 4096);
    std::int32_t part = 0;
    for (std::size_t i = base; i < end; ++i) {
      const std::int32_t d = std::int32_t{a[i]} - std::int32_t{b[i]};
      part += d * d;
    }
    total += part;
  }
  return total;
}

std::int64_t int8_squared_l2(const Int8Vector& a, const Int8Vector& b) {
  return int8_squared_l2(a.view(), b.view());
}

float fp32_squared_l2_unchecked(const float* a, const float* b, std::size_t dim) {
  // Eight independent lanes so the compiler can vectorize without reassociation.
  float acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  std::size_t i = 0;
  for (; i + 8 <= dim; i += 8) {
    for (int j = 0; j < 8; ++j) {
      const float d = a[i + j] - b[i + j];
      acc[j] += d * d;
    }
  }
  float tail = 0.0f;
  for (; i < dim; ++i) {
    const float d = a[i] - b[i];
    tail += d * d;
  }
  return ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7])) +
         tail;
}

float fp32_squared_l2(Fp32View a, Fp32View b) {
  REIS_CHECK(a.size() == b.size(), kDimensionMismatch,
             "fp32_squared_l2: D=" << a.size() << " vs D=" << b.size());
  return fp32_squared_l2_unchecked(a.data(), b.data(), a.size());
}

}  // namespace reis::vdb
