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

#include "vectordb/vectors.hpp"

namespace reis::vdb {

/// Number of set bits in `bytes`.
std::uint64_t popcount_bytes(BitView bytes);

/// popcount(a XOR b). Both operands must have the same byte length.
std::uint32_t hamming_distance(BitView a, BitView b);
std::uint32_t hamming_distance(const BitVector& a, const BitVector& b);

/// Sum of squared component differences, accumulated in 64 bits.
std::int64_t int8_squared_l2(Int8View a, Int8View b);
std::int64_t int8_squared_l2(const Int8Vector& a, const Int8Vector& b);

float fp32_squared_l2(Fp32View a, Fp32View b);

// Unchecked kernel for hot loops (k-means, ground truth); sizes must match.
float fp32_squared_l2_unchecked(const float* a, const float* b, std::size_t dim);

}  // namespace reis::vdb
