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

#include "vectordb/quantizer.hpp"

#include <algorithm>
#include <cmath>

#include "common/binary_io.hpp"

namespace reis::vdb {

void QuantizerModel::validate() const {
  REIS_CHECK(!thresholds.empty(), kInvalidArgument, "QuantizerModel: D = 0");
  REIS_CHECK(thresholds.size() == int8_scales.size(), kDimensionMismatch,
             "QuantizerModel: " << thresholds.size() << " thresholds vs "
                                << int8_scales.size() << " scales");
  for (float s : int8_scales) {
    REIS_CHECK(s > 0.0f && std::isfinite(s), kInvalidArgument,
               "QuantizerModel: non-positive INT8 scale " << s);
  }
}

namespace {

template <typename RowFn>
QuantizerModel train_impl(std::size_t n, std::size_t dim, RowFn&& row) {
  std::vector<double> sum(dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Fp32View v = row(i);
    for (std::size_t d = 0; d < dim; ++d) sum[d] += v[d];
  }
  QuantizerModel q;
  q.thresholds.resize(dim);
  for (std::size_t d = 0; d < dim; ++d) {
    q.thresholds[d] = static_cast<float>(sum[d] / static_cast<double>(n));
  }
  q.int8_scales.assign(dim, 0.0f);
  for (std::size_t i = 0; i < n; ++i) {
    const Fp32View v = row(i);
    for (std::size_t d = 0; d < dim; ++d) {
      q.int8_scales[d] = std::max(q.int8_scales[d], std::fabs(v[d] - q.thresholds[d]));
    }
  }
  for (float& s : q.int8_scales) {
    if (s == 0.0f) s = 1.0f;
  }
  return q;
}

void check_dims(Fp32View v, const QuantizerModel& q) {
  REIS_CHECK(v.size() == q.dim(), kDimensionMismatch,
             "quantizer: vector D=" << v.size() << ", model D=" << q.dim());
}

}  // namespace

QuantizerModel train_quantizer(const VectorSet& sample) {
  REIS_CHECK(!sample.empty(), kInvalidArgument, "train_quantizer: empty sample");
  return train_impl(sample.size(), sample.dim(), [&](std::size_t i) { return sample.row(i); });
}

QuantizerModel train_quantizer(std::span<const Fp32Vector> sample) {
  REIS_CHECK(!sample.empty(), kInvalidArgument, "train_quantizer: empty sample");
  const std::size_t dim = sample.front().dim();
  for (const auto& v : sample) {
    REIS_CHECK(v.dim() == dim, kDimensionMismatch,
               "train_quantizer: ragged sample (D=" << dim << " and D=" << v.dim() << ")");
  }
  return train_impl(sample.size(), dim, [&](std::size_t i) { return sample[i].view(); });
}

void binarize_into(Fp32View v, const QuantizerModel& q, std::span<std::uint8_t> out) {
  check_dims(v, q);
  REIS_CHECK(out.size() == packed_bytes(v.size()), kDimensionMismatch,
             "binarize: output holds " << out.size() << " bytes");
  std::fill(out.begin(), out.end(), std::uint8_t{0});
  for (std::size_t d = 0; d < v.size(); ++d) {
    if (v[d] > q.thresholds[d]) out[d / 8] |= static_cast<std::uint8_t>(0x80u >> (d % 8));
  }
}

BitVector binarize(Fp32View v, const QuantizerModel& q) {
  BitVector bits(v.size());
  binarize_into(v, q, bits.mutable_bytes());
  return bits;
}

void quantize_int8_into(Fp32View v, const QuantizerModel& q, std::span<std::int8_t> out) {
  check_dims(v, q);
  REIS_CHECK(out.size() == v.size(), kDimensionMismatch,
             "quantize_int8: output holds " << out.size() << " components");
  for (std::size_t d = 0; d < v.size(); ++d) {
    const double scaled = 127.0 * (double{v[d]} - double{q.thresholds[d]}) / double{q.int8_scales[d]};
    const double r = std::clamp(std::round(scaled), -127.0, 127.0);
    out[d] = static_cast<std::int8_t>(r);
  }
}

Int8Vector quantize_int8(Fp32View v, const QuantizerModel& q) {
  Int8Vector out;
  out.components.resize(v.size());
  quantize_int8_into(v, q, out.components);
  return out;
}

std::vector<std::uint8_t> serialize_quantizer(const QuantizerModel& q) {
  q.validate();
  ByteWriter w;
  w.magic("RQNT");
  w.u32(static_cast<std::uint32_t>(q.dim()));
  for (float t : q.thresholds) w.f32(t);
  for (float s : q.int8_scales) w.f32(s);
  return w.take();
}

QuantizerModel deserialize_quantizer(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes, "quantizer");
  r.expect_magic("RQNT");
  const std::uint32_t dim = r.u32();
  REIS_CHECK(r.remaining() == std::size_t{dim} * 8, kFormat,
             "quantizer: expected " << std::size_t{dim} * 8 << " payload bytes, found "
                                    << r.remaining());
  QuantizerModel q;
  q.thresholds.resize(dim);
  q.int8_scales.resize(dim);
  for (auto& t : q.thresholds) t = r.f32();
  for (auto& s : q.int8_scales) s = r.f32();
  q.validate();
  return q;
}

}  // namespace reis::vdb
