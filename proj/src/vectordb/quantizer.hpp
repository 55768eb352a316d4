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
#include <span>
#include <vector>

#include "vectordb/vectors.hpp"

namespace reis::vdb {

/// Per-dimension binarization cutoffs plus the symmetric INT8 scales.
/// Queries and database vectors are quantized with the same model.
struct QuantizerModel {
  std::vector<float> thresholds;
  std::vector<float> int8_scales;

  std::size_t dim() const { return thresholds.size(); }
  void validate() const;

  friend bool operator==(const QuantizerModel&, const QuantizerModel&) = default;
};

/// thresholds[d] = mean of component d; int8_scales[d] = max |x_d - thresholds[d]|,
/// or 1.0 when the sample has no spread in that dimension.
QuantizerModel train_quantizer(const VectorSet& sample);
QuantizerModel train_quantizer(std::span<const Fp32Vector> sample);

/// Bit d is set iff v[d] > thresholds[d].
BitVector binarize(Fp32View v, const QuantizerModel& q);
void binarize_into(Fp32View v, const QuantizerModel& q, std::span<std::uint8_t> out);

/// clamp(round(127 * (v[d] - thresholds[d]) / int8_scales[d]), -127, 127).
Int8Vector quantize_int8(Fp32View v, const QuantizerModel& q);
void quantize_int8_into(Fp32View v, const QuantizerModel& q, std::span<std::int8_t> out);

// "RQNT" | u32 D | D x f32 thresholds | D x f32 scales (little-endian).
std::vector<std::uint8_t> serialize_quantizer(const QuantizerModel& q);
QuantizerModel deserialize_quantizer(std::span<const std::uint8_t> bytes);

}  // namespace reis::vdb
