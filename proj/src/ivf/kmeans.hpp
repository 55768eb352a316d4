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
#include <vector>

#include "vectordb/vectors.hpp"

namespace reis::ivf {

struct KmeansParams {
  std::size_t nlist = 1;
  std::size_t max_iters = 25;
  std::uint64_t seed = 0;
  /// Stop when sum ||c_new - c_old||^2 / sum ||c_old||^2 drops below this.
  double tolerance = 1e-4;
  /// Train on a seeded random subset of this many vectors (0 = all). The
  /// empty-cluster guarantee still holds over the full input.
  std::size_t max_training_points = 0;
};

/// Per-iteration diagnostics, mostly for tests.
struct KmeansTrace {
  std::vector<double> objective;  // within-cluster sum of squares after each assignment
  std::size_t iterations = 0;
  std::size_t empty_repairs = 0;
};

/// Lloyd's algorithm from k-means++ seeding. Deterministic for a given seed, and
/// every returned centroid owns at least one vector under assign_clusters().
vdb::VectorSet kmeans_train(const vdb::VectorSet& vectors, const KmeansParams& params,
                            KmeansTrace* trace = nullptr);

/// argmin over centroids of fp32_squared_l2; ties go to the lower centroid id.
std::vector<std::uint32_t> assign_clusters(const vdb::VectorSet& vectors,
                                           const vdb::VectorSet& centroids);

}  // namespace reis::ivf
