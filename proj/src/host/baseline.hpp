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
#include <string>
#include <vector>

#include "layout/device.hpp"
#include "vectordb/vectors.hpp"

namespace reis::host {

struct HostCostModel {
  double storage_read_bw_gbps = 6.8;
  // Scan rates in vectors per us; zero or less means "calibrate".
  double hamming_vectors_per_us = 0.0;
  double int8_vectors_per_us = 0.0;
  double fp32_vectors_per_us = 0.0;
  // End-to-end pipeline constants, seconds.
  double embedding_model_load_s = 0.6184;
  double encoding_s = 0.1100;
  double generation_model_load_s = 0.7892;
  double generation_s = 17.452;

  bool calibrated() const {
    return hamming_vectors_per_us > 0 && int8_vectors_per_us > 0 && fp32_vectors_per_us > 0;
  }
  void validate() const;
};

/// Fills in every non-positive scan rate by timing the host kernels on random
/// vectors of dimension `dim`.
HostCostModel calibrate(HostCostModel model, std::uint32_t dim, std::uint64_t seed);

/// Per-query ordered true neighbor lists.
using GroundTruth = std::vector<std::vector<std::uint32_t>>;

/// Exhaustive FP32 squared-L2 search, ties broken by dataset index.
GroundTruth exact_ground_truth(const vdb::VectorSet& queries, const vdb::VectorSet& vectors,
                               std::uint32_t k);

/// |result ∩ truth[:k]| / k.
double recall_at_k(std::span<const std::uint32_t> result, std::span<const std::uint32_t> truth,
                   std::uint32_t k);
double mean_recall_at_k(const GroundTruth& results, const GroundTruth& truth, std::uint32_t k);

std::vector<std::uint8_t> serialize_ground_truth(const GroundTruth& gt, std::uint32_t k);
GroundTruth deserialize_ground_truth(std::span<const std::uint8_t> bytes, std::uint32_t* k = nullptr);

struct HostParams {
  std::uint32_t k = 10;
  std::uint32_t nprobe = 1;
  std::uint32_t candidate_multiplier = 10;
};

struct HostSearchResult {
  GroundTruth indices;                  // per query, ranked
  std::vector<std::int64_t> distances;  // INT8 distances, row-major per query
  double load_s = 0.0;                  // per query
  double scan_s = 0.0;                  // summed over queries
  std::uint64_t vectors_scanned = 0;

  double latency_per_query_s() const {
    return indices.empty() ? 0.0 : load_s + scan_s / static_cast<double>(indices.size());
  }
};

/// Loading time for `bytes` at the modeled storage bandwidth.
double load_seconds(std::uint64_t bytes, const HostCostModel& model);

/// Host-side retrieval over the deployed image: binary Hamming scan, top
/// candidates by (distance, slot), INT8 rerank by (distance, dataset index).
/// Every query pays for loading the whole image.
HostSearchResult host_search(const layout::SsdDevice& device, const layout::DeployedDatabase& db,
                             const vdb::VectorSet& queries, const HostParams& params,
                             const HostCostModel& model);

struct BreakdownRow {
  std::string stage;
  double seconds = 0.0;
  double percent = 0.0;
};

/// Six-stage end-to-end latency table. `dataset_loading_s` is zero for the
/// in-storage system.
std::vector<BreakdownRow> end_to_end_breakdown(const HostCostModel& model,
                                               double dataset_loading_s, double retrieval_s);

}  // namespace reis::host
