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

#include "ivf/kmeans.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <numeric>
#include <random>

#include "vectordb/distance.hpp"

namespace reis::ivf {

namespace {

using vdb::VectorSet;

struct Assignment {
  std::vector<std::uint32_t> labels;
  std::vector<float> dists;
};

Assignment assign_with_dists(const VectorSet& vectors, const VectorSet& centroids) {
  const std::size_t n = vectors.size();
  const std::size_t k = centroids.size();
  const std::size_t dim = vectors.dim();
  Assignment a;
  a.labels.resize(n);
  a.dists.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const float* x = vectors.row(i).data();
    float best = std::numeric_limits<float>::infinity();
    std::uint32_t best_c = 0;
    for (std::size_t c = 0; c < k; ++c) {
      const float d = vdb::fp32_squared_l2_unchecked(x, centroids.row(c).data(), dim);
      if (d < best) {
        best = d;
        best_c = static_cast<std::uint32_t>(c);
      }
    }
    a.labels[i] = best_c;
    a.dists[i] = best;
  }
  return a;
}

VectorSet kmeans_plus_plus(const VectorSet& vectors, std::size_t k, std::mt19937_64& rng) {
  const std::size_t n = vectors.size();
  const std::size_t dim = vectors.dim();
  VectorSet centroids(dim);
  std::vector<double> min_d(n, std::numeric_limits<double>::infinity());

  std::size_t pick = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  for (std::size_t c = 0; c < k; ++c) {
    centroids.push_back(vectors.row(pick));
    const float* cv = centroids.row(c).data();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = vdb::fp32_squared_l2_unchecked(vectors.row(i).data(), cv, dim);
      if (d < min_d[i]) min_d[i] = d;
      total += min_d[i];
    }
    if (c + 1 == k) break;
    if (total <= 0.0) {
      // Every point coincides with a chosen centroid; fall back to uniform picks.
      pick = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
      continue;
    }
    const double target = std::uniform_real_distribution<double>(0.0, total)(rng);
    double acc = 0.0;
    pick = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      acc += min_d[i];
      if (acc > target && min_d[i] > 0.0) {
        pick = i;
        break;
      }
    }
  }
  return centroids;
}

// Moves the farthest point of a multi-member cluster into each empty cluster.
// Returns the number of clusters repaired.
std::size_t repair_empty(const VectorSet& vectors, VectorSet& centroids, Assignment& a) {
  const std::size_t k = centroids.size();
  std::vector<std::size_t> counts(k, 0);
  for (auto l : a.labels) ++counts[l];
  std::size_t repaired = 0;
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] != 0) continue;
    std::size_t far = a.labels.size();
    float far_d = -1.0f;
    for (std::size_t i = 0; i < a.labels.size(); ++i) {
      if (counts[a.labels[i]] > 1 && a.dists[i] > far_d) {
        far_d = a.dists[i];
        far = i;
      }
    }
    REIS_CHECK(far < a.labels.size(), kInvalidArgument,
               "kmeans: cannot populate cluster " << c << " (too few distinct points)");
    --counts[a.labels[far]];
    a.labels[far] = static_cast<std::uint32_t>(c);
    a.dists[far] = 0.0f;
    counts[c] = 1;
    auto dst = centroids.mutable_row(c);
    auto src = vectors.row(far);
    std::copy(src.begin(), src.end(), dst.begin());
    ++repaired;
  }
  return repaired;
}

VectorSet cluster_means(const VectorSet& vectors, const VectorSet& old,
                        const std::vector<std::uint32_t>& labels) {
  const std::size_t k = old.size();
  const std::size_t dim = vectors.dim();
  std::vector<double> sums(k * dim, 0.0);
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto row = vectors.row(i);
    double* s = sums.data() + std::size_t{labels[i]} * dim;
    for (std::size_t d = 0; d < dim; ++d) s[d] += row[d];
    ++counts[labels[i]];
  }
  VectorSet out = old;
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) continue;
    auto dst = out.mutable_row(c);
    const double inv = 1.0 / static_cast<double>(counts[c]);
    for (std::size_t d = 0; d < dim; ++d) {
      dst[d] = static_cast<float>(sums[c * dim + d] * inv);
    }
  }
  return out;
}

double relative_shift(const VectorSet& before, const VectorSet& after) {
  double moved = 0.0;
  double norm = 0.0;
  const auto& b = before.data();
  const auto& a = after.data();
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double d = double{a[i]} - double{b[i]};
    moved += d * d;
    norm += double{b[i]} * double{b[i]};
  }
  if (norm == 0.0) return moved == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return moved / norm;
}

}  // namespace

VectorSet kmeans_train(const VectorSet& vectors, const KmeansParams& params,
                       KmeansTrace* trace) {
  REIS_CHECK(params.nlist >= 1, kInvalidArgument, "kmeans: nlist must be >= 1");
  REIS_CHECK(params.nlist <= vectors.size(), kInvalidArgument,
             "kmeans: nlist " << params.nlist << " exceeds " << vectors.size() << " vectors");

  std::mt19937_64 rng(params.seed);
  VectorSet sample;
  const VectorSet* train = &vectors;
  if (params.max_training_points > 0 && params.max_training_points < vectors.size()) {
    REIS_CHECK(params.nlist <= params.max_training_points, kInvalidArgument,
               "kmeans: nlist " << params.nlist << " exceeds the training sample of "
                                << params.max_training_points);
    std::vector<std::uint32_t> ids(vectors.size());
    std::iota(ids.begin(), ids.end(), 0u);
    std::shuffle(ids.begin(), ids.end(), rng);
    ids.resize(params.max_training_points);
    std::sort(ids.begin(), ids.end());
    sample = VectorSet(vectors.dim());
    sample.resize(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const auto src = vectors.row(ids[i]);
      std::copy(src.begin(), src.end(), sample.mutable_row(i).begin());
    }
    train = &sample;
  }
  VectorSet centroids = kmeans_plus_plus(*train, params.nlist, rng);

  KmeansTrace local;
  KmeansTrace& tr = trace ? *trace : local;
  tr = KmeansTrace{};

  for (std::size_t it = 0; it < params.max_iters; ++it) {
    Assignment a = assign_with_dists(*train, centroids);
    tr.empty_repairs += repair_empty(*train, centroids, a);

    double objective = 0.0;
    for (float d : a.dists) objective += d;
    // Lloyd's objective never increases (up to float rounding in the sums).
    assert(tr.objective.empty() || objective <= tr.objective.back() * (1.0 + 1e-5) + 1e-9);
    tr.objective.push_back(objective);
    tr.iterations = it + 1;

    VectorSet next = cluster_means(*train, centroids, a.labels);
    const double shift = relative_shift(centroids, next);
    centroids = std::move(next);
    if (shift < params.tolerance) break;
  }

  // The last mean update can leave a centroid without members; repair until the
  // final assignment covers every cluster.
  for (std::size_t round = 0;; ++round) {
    Assignment a = assign_with_dists(vectors, centroids);
    const std::size_t fixed = repair_empty(vectors, centroids, a);
    if (fixed == 0) break;
    tr.empty_repairs += fixed;
    REIS_CHECK(round < 2 * params.nlist + 8, kInternal, "kmeans: empty-cluster repair diverged");
  }
  return centroids;
}

std::vector<std::uint32_t> assign_clusters(const VectorSet& vectors, const VectorSet& centroids) {
  REIS_CHECK(!centroids.empty(), kInvalidArgument, "assign_clusters: no centroids");
  REIS_CHECK(vectors.dim() == centroids.dim() || vectors.empty(), kDimensionMismatch,
             "assign_clusters: vectors D=" << vectors.dim() << ", centroids D="
                                           << centroids.dim());
  return assign_with_dists(vectors, centroids).labels;
}

}  // namespace reis::ivf
