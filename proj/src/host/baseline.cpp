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

#include "host/baseline.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <unordered_set>

#include "common/binary_io.hpp"
#include "common/error.hpp"
#include "vectordb/distance.hpp"
#include "vectordb/quantizer.hpp"

namespace reis::host {

namespace {

/// Vectors per us of `pass`, which processes `n` vectors per call.
template <class Pass>
double time_rate(std::size_t n, Pass pass) {
  using clock = std::chrono::steady_clock;
  std::size_t done = 0;
  const auto start = clock::now();
  auto elapsed = clock::duration::zero();
  do {
    pass();
    done += n;
    elapsed = clock::now() - start;
  } while (elapsed < std::chrono::milliseconds(30));
  const double us = std::chrono::duration<double, std::micro>(elapsed).count();
  return static_cast<double>(done) / us;
}

}  // namespace

void HostCostModel::validate() const {
  REIS_CHECK(storage_read_bw_gbps > 0, kInvalidArgument, "host: storage bandwidth must be > 0");
  REIS_CHECK(embedding_model_load_s >= 0 && encoding_s >= 0 && generation_model_load_s >= 0 &&
                 generation_s >= 0,
             kInvalidArgument, "host: pipeline constants must be >= 0");
}

HostCostModel calibrate(HostCostModel model, std::uint32_t dim, std::uint64_t seed) {
  REIS_CHECK(dim > 0 && dim % 8 == 0, kInvalidArgument, "host calibration: D=" << dim);
  constexpr std::size_t kN = 2048;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> byte(0, 255);
  const std::size_t nb = dim / 8;
  std::vector<std::uint8_t> bits(kN * nb);
  for (auto& b : bits) b = static_cast<std::uint8_t>(byte(rng));
  std::vector<std::int8_t> i8(kN * dim);
  for (auto& v : i8) v = static_cast<std::int8_t>(byte(rng) - 128);
  std::normal_distribution<float> normal;
  std::vector<float> f32(kN * dim);
  for (auto& v : f32) v = normal(rng);

  volatile std::uint64_t sink = 0;
  if (model.hamming_vectors_per_us <= 0) {
    const vdb::BitView q(bits.data(), nb);
    model.hamming_vectors_per_us = time_rate(kN, [&] {
      std::uint64_t s = 0;
      for (std::size_t i = 0; i < kN; ++i) s += vdb::hamming_distance(q, {bits.data() + i * nb, nb});
      sink = sink + s;
    });
  }
  if (model.int8_vectors_per_us <= 0) {
    const vdb::Int8View q(i8.data(), dim);
    model.int8_vectors_per_us = time_rate(kN, [&] {
      std::int64_t s = 0;
      for (std::size_t i = 0; i < kN; ++i) s += vdb::int8_squared_l2(q, {i8.data() + i * dim, dim});
      sink = sink + static_cast<std::uint64_t>(s);
    });
  }
  if (model.fp32_vectors_per_us <= 0) {
    model.fp32_vectors_per_us = time_rate(kN, [&] {
      float s = 0;
      for (std::size_t i = 0; i < kN; ++i) {
        s += vdb::fp32_squared_l2_unchecked(f32.data(), f32.data() + i * dim, dim);
      }
      sink = sink + static_cast<std::uint64_t>(s);
    });
  }
  return model;
}

GroundTruth exact_ground_truth(const vdb::VectorSet& queries, const vdb::VectorSet& vectors,
                               std::uint32_t k) {
  REIS_CHECK(queries.dim() == vectors.dim(), kDimensionMismatch,
             "ground truth: query D=" << queries.dim() << " vs database D=" << vectors.dim());
  REIS_CHECK(k >= 1 && k <= vectors.size(), kInvalidArgument,
             "ground truth: k=" << k << " with " << vectors.size() << " vectors");
  const std::size_t n = vectors.size();
  const std::size_t dim = vectors.dim();
  GroundTruth out(queries.size());
  std::vector<std::pair<float, std::uint32_t>> scored(n);
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const float* qp = queries.row(q).data();
    for (std::size_t i = 0; i < n; ++i) {
      scored[i] = {vdb::fp32_squared_l2_unchecked(qp, vectors.row(i).data(), dim),
                   static_cast<std::uint32_t>(i)};
    }
    std::partial_sort(scored.begin(), scored.begin() + k, scored.end());
    out[q].reserve(k);
    for (std::uint32_t j = 0; j < k; ++j) out[q].push_back(scored[j].second);
  }
  return out;
}

double recall_at_k(std::span<const std::uint32_t> result, std::span<const std::uint32_t> truth,
                   std::uint32_t k) {
  REIS_CHECK(k >= 1, kInvalidArgument, "recall: k must be >= 1");
  const std::size_t tk = std::min<std::size_t>(k, truth.size());
  const std::size_t rk = std::min<std::size_t>(k, result.size());
  std::unordered_set<std::uint32_t> want(truth.begin(), truth.begin() + tk);
  std::size_t hit = 0;
  std::unordered_set<std::uint32_t> seen;
  for (std::size_t i = 0; i < rk; ++i) {
    if (want.contains(result[i]) && seen.insert(result[i]).second) ++hit;
  }
  return static_cast<double>(hit) / static_cast<double>(k);
}

double mean_recall_at_k(const GroundTruth& results, const GroundTruth& truth, std::uint32_t k) {
  REIS_CHECK(results.size() == truth.size(), kInvalidArgument,
             "recall: " << results.size() << " result lists vs " << truth.size() << " truths");
  if (results.empty()) return 0.0;
  double s = 0;
  for (std::size_t q = 0; q < results.size(); ++q) s += recall_at_k(results[q], truth[q], k);
  return s / static_cast<double>(results.size());
}

std::vector<std::uint8_t> serialize_ground_truth(const GroundTruth& gt, std::uint32_t k) {
  ByteWriter w;
  w.magic("RGTK");
  w.u32(k);
  w.u32(static_cast<std::uint32_t>(gt.size()));
  for (const auto& row : gt) {
    REIS_CHECK(row.size() == k, kInvalidArgument,
               "ground truth row has " << row.size() << " entries, expected " << k);
    for (auto v : row) w.u32(v);
  }
  return w.take();
}

GroundTruth deserialize_ground_truth(std::span<const std::uint8_t> bytes, std::uint32_t* k_out) {
  ByteReader r(bytes, "ground truth");
  r.expect_magic("RGTK");
  const std::uint32_t k = r.u32();
  const std::uint32_t nq = r.u32();
  REIS_CHECK(r.remaining() == std::uint64_t{nq} * k * 4, kFormat,
             "ground truth: " << r.remaining() << " payload bytes for " << nq << " x " << k);
  GroundTruth gt(nq);
  for (auto& row : gt) {
    row.resize(k);
    for (auto& v : row) v = r.u32();
  }
  if (k_out != nullptr) *k_out = k;
  return gt;
}

double load_seconds(std::uint64_t bytes, const HostCostModel& model) {
  return static_cast<double>(bytes) / (model.storage_read_bw_gbps * 1e9);
}

HostSearchResult host_search(const layout::SsdDevice& device, const layout::DeployedDatabase& db,
                             const vdb::VectorSet& queries, const HostParams& params,
                             const HostCostModel& model) {
  model.validate();
  REIS_CHECK(model.calibrated(), kInvalidArgument, "host search: cost model is not calibrated");
  REIS_CHECK(queries.empty() || queries.dim() == db.dim, kDimensionMismatch,
             "host search: query D=" << queries.dim() << " vs database D=" << db.dim);
  REIS_CHECK(params.k >= 1 && params.k <= db.size, kInvalidArgument,
             "host search: k=" << params.k << " with " << db.size << " entries");
  REIS_CHECK(params.candidate_multiplier >= 1, kInvalidArgument,
             "host search: candidate multiplier must be >= 1");
  const bool ivf = db.mode == layout::DeployMode::kIvf;
  if (ivf) {
    REIS_CHECK(params.nprobe >= 1 && params.nprobe <= db.nlist(), kInvalidArgument,
               "host search: nprobe " << params.nprobe << " outside [1, " << db.nlist() << "]");
  }

  HostSearchResult out;
  out.load_s = queries.empty() ? 0.0 : load_seconds(db.image_bytes(device.geometry()), model);
  const std::size_t m = std::size_t{params.k} * params.candidate_multiplier;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> cand;  // (hamming, position)
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const auto bits = vdb::binarize(queries.row(q), db.quantizer);
    const auto q8 = vdb::quantize_int8(queries.row(q), db.quantizer);
    cand.clear();
    std::uint64_t scanned = 0;
    auto scan_range = [&](std::uint64_t first, std::uint64_t last) {
      for (std::uint64_t pos = first; pos <= last; ++pos) {
        cand.emplace_back(vdb::hamming_distance(bits.view(), device.binary_embedding(db, pos)),
                          static_cast<std::uint32_t>(pos));
      }
      scanned += last - first + 1;
    };
    if (ivf) {
      std::vector<std::pair<std::uint32_t, std::uint32_t>> cents;
      for (std::uint32_t c = 0; c < db.nlist(); ++c) {
        cents.emplace_back(vdb::hamming_distance(bits.view(), device.centroid_embedding(db, c)), c);
      }
      scanned += db.nlist();
      std::partial_sort(cents.begin(), cents.begin() + params.nprobe, cents.end());
      for (std::uint32_t j = 0; j < params.nprobe; ++j) {
        const auto& e = db.rivf[cents[j].second];
        scan_range(e.first_emb_index, e.last_emb_index);
      }
    } else {
      scan_range(0, db.size - 1);
    }
    if (cand.size() > m) {
      std::nth_element(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(m - 1),
                       cand.end());
      cand.resize(m);
    }
    std::vector<std::pair<std::int64_t, std::uint32_t>> ranked;
    ranked.reserve(cand.size());
    for (const auto& [d, pos] : cand) {
      ranked.emplace_back(vdb::int8_squared_l2(q8.view(), device.int8_embedding(db, pos)),
                          db.position_to_dataset[pos]);
    }
    const std::size_t keep = std::min<std::size_t>(params.k, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep),
                      ranked.end());
    std::vector<std::uint32_t> ids;
    for (std::size_t j = 0; j < keep; ++j) {
      ids.push_back(ranked[j].second);
      out.distances.push_back(ranked[j].first);
    }
    out.indices.push_back(std::move(ids));
    out.vectors_scanned += scanned;
    out.scan_s += (static_cast<double>(scanned) / model.hamming_vectors_per_us +
                   static_cast<double>(cand.size()) / model.int8_vectors_per_us) /
                  1e6;
  }
  return out;
}

std::vector<BreakdownRow> end_to_end_breakdown(const HostCostModel& model,
                                               double dataset_loading_s, double retrieval_s) {
  model.validate();
  REIS_CHECK(dataset_loading_s >= 0 && retrieval_s >= 0, kInvalidArgument,
             "breakdown: negative stage time");
  std::vector<BreakdownRow> rows = {
      {"Embedding Model Loading", model.embedding_model_load_s, 0},
      {"Encoding", model.encoding_s, 0},
      {"Dataset Loading", dataset_loading_s, 0},
      {"Search", retrieval_s, 0},
      {"Generation Model Loading", model.generation_model_load_s, 0},
      {"Generation", model.generation_s, 0},
  };
  double total = 0;
  for (const auto& r : rows) total += r.seconds;
  for (auto& r : rows) r.percent = total > 0 ? 100.0 * r.seconds / total : 0.0;
  return rows;
}

}  // namespace reis::host
