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

#include "ivf/kmeans.hpp"

namespace reis::ivf {

/// Inverted-file index over FP32 vectors. Built once, immutable afterwards.
struct IvfIndex {
  vdb::VectorSet centroids;
  std::vector<std::uint32_t> assignments;                  // dataset index -> cluster
  std::vector<std::vector<std::uint32_t>> cluster_members;  // ascending dataset indices
  std::vector<std::uint8_t> tags;                          // cluster id mod 256

  std::size_t nlist() const { return centroids.size(); }
  std::size_t dim() const { return centroids.dim(); }
  std::size_t size() const { return assignments.size(); }

  /// Checks the partition, ordering, and tag invariants; throws kFormat on failure.
  void validate() const;

  friend bool operator==(const IvfIndex& a, const IvfIndex& b) {
    return a.centroids.dim() == b.centroids.dim() &&
           a.centroids.data() == b.centroids.data() && a.assignments == b.assignments &&
           a.cluster_members == b.cluster_members && a.tags == b.tags;
  }
};

IvfIndex build_index(const vdb::VectorSet& vectors, const KmeansParams& params);

/// round(sqrt(n)) clamped to [1, n].
std::size_t default_nlist(std::size_t n);

// "RIVF" | u32 D | u32 nlist | nlist x D f32 centroids | nlist x u32 member counts |
// members, cluster by cluster, as u32 dataset indices (little-endian).
std::vector<std::uint8_t> serialize_index(const IvfIndex& index);
IvfIndex deserialize_index(std::span<const std::uint8_t> bytes);

}  // namespace reis::ivf
