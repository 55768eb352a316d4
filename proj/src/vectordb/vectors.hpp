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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "common/error.hpp"

namespace reis::vdb {

using Fp32View = std::span<const float>;
using BitView = std::span<const std::uint8_t>;
using Int8View = std::span<const std::int8_t>;

/// Number of bytes needed to pack `dim` bits.
constexpr std::size_t packed_bytes(std::size_t dim) { return (dim + 7) / 8; }

/// Full-precision embedding. Components must be finite and non-empty.
class Fp32Vector {
 public:
  Fp32Vector() = default;
  explicit Fp32Vector(std::vector<float> components)
      : components_(std::move(components)) {
    REIS_CHECK(!components_.empty(), kInvalidArgument, "Fp32Vector: empty");
    for (float c : components_) {
      REIS_CHECK(std::isfinite(c), kInvalidArgument, "Fp32Vector: non-finite component");
    }
  }

  std::size_t dim() const { return components_.size(); }
  float operator[](std::size_t i) const { return components_[i]; }
  Fp32View view() const { return components_; }
  operator Fp32View() const { return components_; }
  const std::vector<float>& components() const { return components_; }

 private:
  std::vector<float> components_;
};

/// Packed binary embedding. Bit d lives in byte d/8 at position 7 - d%8
/// (most-significant bit first); padding bits past `dim` are zero.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t dim) : dim_(dim), bytes_(packed_bytes(dim), 0) {}
  BitVector(std::size_t dim, std::vector<std::uint8_t> bytes)
      : dim_(dim), bytes_(std::move(bytes)) {
    REIS_CHECK(bytes_.size() == packed_bytes(dim_), kDimensionMismatch,
               "BitVector: " << bytes_.size() << " bytes for " << dim_ << " bits");
  }

  std::size_t dim() const { return dim_; }
  std::size_t byte_size() const { return bytes_.size(); }

  bool bit(std::size_t d) const { return (bytes_[d / 8] >> (7 - d % 8)) & 1u; }
  void set(std::size_t d, bool on) {
    const auto mask = static_cast<std::uint8_t>(1u << (7 - d % 8));
    if (on) {
      bytes_[d / 8] |= mask;
    } else {
      bytes_[d / 8] &= static_cast<std::uint8_t>(~mask);
    }
  }

  BitView view() const { return bytes_; }
  std::span<std::uint8_t> mutable_bytes() { return bytes_; }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<std::uint8_t> bytes_;
};

/// INT8 embedding. Components are in [-127, 127]. `scale` is informational:
/// distances are computed on the raw codes.
struct Int8Vector {
  std::vector<std::int8_t> components;
  float scale = 1.0f / 127.0f;

  std::size_t dim() const { return components.size(); }
  Int8View view() const { return components; }
};

/// Dense row-major set of FP32 vectors sharing one dimensionality.
class VectorSet {
 public:
  VectorSet() = default;
  explicit VectorSet(std::size_t dim) : dim_(dim) {}
  VectorSet(std::size_t dim, std::vector<float> data) : dim_(dim), data_(std::move(data)) {
    REIS_CHECK(dim_ > 0, kInvalidArgument, "VectorSet: zero dimension");
    REIS_CHECK(data_.size() % dim_ == 0, kDimensionMismatch,
               "VectorSet: " << data_.size() << " floats is not a multiple of D=" << dim_);
  }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : data_.size() / dim_; }
  bool empty() const { return size() == 0; }

  Fp32View row(std::size_t i) const { return Fp32View(data_).subspan(i * dim_, dim_); }
  std::span<float> mutable_row(std::size_t i) {
    return std::span<float>(data_).subspan(i * dim_, dim_);
  }

  void push_back(Fp32View v) {
    REIS_CHECK(v.size() == dim_, kDimensionMismatch,
               "VectorSet: push of D=" << v.size() << " into D=" << dim_);
    data_.insert(data_.end(), v.begin(), v.end());
  }
  void resize(std::size_t n) { data_.resize(n * dim_); }

  const std::vector<float>& data() const { return data_; }
  std::vector<float>& mutable_data() { return data_; }

 private:
  std::size_t dim_ = 0;
  std::vector<float> data_;
};

}  // namespace reis::vdb
