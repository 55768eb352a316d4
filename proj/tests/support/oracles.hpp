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


// Hand-rolled generators and reference implementations shared by the tests.
// The reference code is deliberately naive and never calls into the library
// code it checks.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "layout/documents.hpp"
#include "ssd/config.hpp"
#include "vectordb/vectors.hpp"

namespace reis::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t u64() { return rng_(); }
  std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng_); }
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }
  float normal() { return std::normal_distribution<float>(0.0f, 1.0f)(rng_); }
  bool coin() { return below(2) == 1; }

  std::vector<std::uint8_t> bytes(std::size_t n) {
    std::vector<std::uint8_t> b(n);
    for (auto& x : b) x = static_cast<std::uint8_t>(below(256));
    return b;
  }
  std::vector<std::int8_t> int8s(std::size_t n) {
    std::vector<std::int8_t> v(n);
    for (auto& x : v) x = static_cast<std::int8_t>(range(-127, 127));
    return v;
  }
  std::vector<float> floats(std::size_t n) {
    std::vector<float> v(n);
    for (auto& x : v) x = normal();
    return v;
  }
  vdb::VectorSet vectors(std::size_t n, std::size_t dim) { return vdb::VectorSet(dim, floats(n * dim)); }

  /// `blobs` tight Gaussian clusters around well-separated centers.
  vdb::VectorSet blobs(std::size_t n, std::size_t dim, std::size_t blobs, float sigma,
                       std::vector<std::uint32_t>* labels = nullptr) {
    std::vector<float> centers(blobs * dim);
    for (auto& c : centers) c = normal() * 4.0f;
    vdb::VectorSet out(dim);
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto b = static_cast<std::uint32_t>(below(blobs));
      if (labels) labels->push_back(b);
      auto row = out.mutable_row(i);
      for (std::size_t d = 0; d < dim; ++d) row[d] = centers[b * dim + d] + sigma * normal();
    }
    return out;
  }

  layout::ChunkList documents(std::size_t n, std::size_t min_len, std::size_t max_len) {
    layout::ChunkList docs;
    for (std::size_t i = 0; i < n; ++i) {
      std::string s = "doc-" + std::to_string(i) + ":";
      const auto len = static_cast<std::size_t>(range(static_cast<std::int64_t>(min_len),
                                                      static_cast<std::int64_t>(max_len)));
      while (s.size() < len) s += static_cast<char>('a' + below(26));
      s.resize(len);
      docs.add(s);
    }
    return docs;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// ----------------------------------------------------------------- oracles

inline std::uint32_t naive_hamming(const std::vector<std::uint8_t>& a,
                                   const std::vector<std::uint8_t>& b) {
  std::uint32_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (int bit = 0; bit < 8; ++bit) n += ((a[i] >> bit) & 1) != ((b[i] >> bit) & 1);
  }
  return n;
}

inline std::int64_t naive_int8_l2(const std::vector<std::int8_t>& a, const std::vector<std::int8_t>& b) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::int64_t d = std::int64_t{a[i]} - std::int64_t{b[i]};
    s += d * d;
  }
  return s;
}

inline long double precise_l2(vdb::Fp32View a, vdb::Fp32View b) {
  long double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const long double d = static_cast<long double>(a[i]) - static_cast<long double>(b[i]);
    s += d * d;
  }
  return s;
}

/// Mean-threshold binarization, MSB-first, written out bit by bit.
inline std::vector<std::uint8_t> naive_binarize(vdb::Fp32View v, const std::vector<float>& t) {
  std::vector<std::uint8_t> out((v.size() + 7) / 8, 0);
  for (std::size_t d = 0; d < v.size(); ++d) {
    if (v[d] > t[d]) out[d / 8] = static_cast<std::uint8_t>(out[d / 8] | (0x80u >> (d % 8)));
  }
  return out;
}

inline std::vector<std::int8_t> naive_int8(vdb::Fp32View v, const std::vector<float>& t,
                                           const std::vector<float>& s) {
  std::vector<std::int8_t> out(v.size());
  for (std::size_t d = 0; d < v.size(); ++d) {
    double q = std::round(127.0 * (double{v[d]} - double{t[d]}) / double{s[d]});
    q = std::max(-127.0, std::min(127.0, q));
    out[d] = static_cast<std::int8_t>(q);
  }
  return out;
}

/// Brute-force binary + INT8 retrieval with the engine's tie rules, written
/// from the definition: Hamming top-m by (distance, position), then INT8 top-k
/// by (distance, dataset index).
struct OracleHit {
  std::uint32_t dataset_index;
  std::int64_t distance;
};

inline std::vector<OracleHit> brute_force_bq_rerank(
    const std::vector<std::vector<std::uint8_t>>& bits_by_pos,
    const std::vector<std::vector<std::int8_t>>& int8_by_pos,
    const std::vector<std::uint32_t>& dataset_of_pos, const std::vector<std::uint8_t>& qbits,
    const std::vector<std::int8_t>& qint8, std::size_t m, std::size_t k) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> ham;  // (dist, pos)
  for (std::uint32_t p = 0; p < bits_by_pos.size(); ++p) {
    ham.emplace_back(naive_hamming(bits_by_pos[p], qbits), p);
  }
  std::sort(ham.begin(), ham.end());
  ham.resize(std::min(m, ham.size()));
  std::vector<std::pair<std::int64_t, std::uint32_t>> fine;  // (int8 dist, dataset idx)
  for (const auto& [d, p] : ham) {
    fine.emplace_back(naive_int8_l2(int8_by_pos[p], qint8), dataset_of_pos[p]);
  }
  std::sort(fine.begin(), fine.end());
  fine.resize(std::min(k, fine.size()));
  std::vector<OracleHit> out;
  for (const auto& [d, i] : fine) out.push_back({i, d});
  return out;
}

/// A geometry small enough for exhaustive checks.
inline ssd::SsdConfig toy_config(std::uint32_t channels = 2, std::uint32_t dies = 1,
                                 std::uint32_t planes = 1, std::uint32_t pages_per_block = 64,
                                 std::uint32_t blocks = 4) {
  ssd::SsdConfig c = ssd::preset_config("reis-ssd1");
  c.geometry.channels = channels;
  c.geometry.dies_per_channel = dies;
  c.geometry.planes_per_die = planes;
  c.geometry.pages_per_block = pages_per_block;
  c.geometry.blocks_per_plane = blocks;
  return c;
}

}  // namespace reis::testing
