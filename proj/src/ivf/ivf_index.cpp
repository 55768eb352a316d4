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

#include "ivf/ivf_index.hpp"

#include <algorithm>
#include <cmath>

#include "common/binary_io.hpp"

namespace reis::ivf {

namespace {

IvfIndex from_parts(vdb::VectorSet centroids, std::vector<std::uint32_t> assignments) {
  IvfIndex index;
  const std::size_t nlist = centroids.size();
  index.centroids = std::move(centroids);
  index.assignments = std::move(assignments);
  index.cluster_members.assign(nlist, {});
  for (std::size_t i = 0; i < index.assignments.size(); ++i) {
    index.cluster_members[index.assignments[i]].push_back(static_cast<std::uint32_t>(i));
  }
  index.tags.resize(nlist);
  for (std::size_t c = 0; c < nlist; ++c) index.tags[c] = static_cast<std::uint8_t>(c % 256);
  return index;
}

}  // namespace

void IvfIndex::validate() const {
  const std::size_t k = nlist();
  REIS_CHECK(k >= 1, kFormat, "IvfIndex: no clusters");
  REIS_CHECK(cluster_members.size() == k && tags.size() == k, kFormat,
             "IvfIndex: per-cluster arrays disagree with nlist " << k);
  std::vector<bool> seen(assignments.size(), false);
  std::size_t total = 0;
  for (std::size_t c = 0; c < k; ++c) {
    REIS_CHECK(tags[c] == static_cast<std::uint8_t>(c % 256), kFormat,
               "IvfIndex: tag of cluster " << c << " is " << int{tags[c]});
    const auto& m = cluster_members[c];
    REIS_CHECK(std::is_sorted(m.begin(), m.end()), kFormat,
               "IvfIndex: members of cluster " << c << " not ascending");
    for (auto i : m) {
      REIS_CHECK(i < assignments.size() && !seen[i], kFormat,
                 "IvfIndex: index " << i << " missing or listed twice");
      REIS_CHECK(assignments[i] == c, kFormat,
                 "IvfIndex: index " << i << " listed under " << c << " but assigned "
                                    << assignments[i]);
      seen[i] = true;
    }
    total += m.size();
  }
  REIS_CHECK(total == assignments.size(), kFormat,
             "IvfIndex: members cover " << total << " of " << assignments.size());
}

IvfIndex build_index(const vdb::VectorSet& vectors, const KmeansParams& params) {
  auto centroids = kmeans_train(vectors, params);
  auto assignments = assign_clusters(vectors, centroids);
  IvfIndex index = from_parts(std::move(centroids), std::move(assignments));
  index.validate();
  return index;
}

std::size_t default_nlist(std::size_t n) {
  const auto r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  return std::clamp<std::size_t>(r, 1, std::max<std::size_t>(n, 1));
}

std::vector<std::uint8_t> serialize_index(const IvfIndex& index) {
  ByteWriter w;
  w.magic("RIVF");
  w.u32(static_cast<std::uint32_t>(index.dim()));
  w.u32(static_cast<std::uint32_t>(index.nlist()));
  for (float f : index.centroids.data()) w.f32(f);
  for (const auto& m : index.cluster_members) w.u32(static_cast<std::uint32_t>(m.size()));
  for (const auto& m : index.cluster_members) {
    for (auto i : m) w.u32(i);
  }
  return w.take();
}

IvfIndex deserialize_index(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes, "IVF index");
  r.expect_magic("RIVF");
  const std::uint32_t dim = r.u32();
  const std::uint32_t nlist = r.u32();
  REIS_CHECK(dim > 0 && nlist > 0, kFormat, "IVF index: D=" << dim << ", nlist=" << nlist);
  std::vector<float> cdata(std::size_t{dim} * nlist);
  for (auto& f : cdata) f = r.f32();
  std::vector<std::uint32_t> counts(nlist);
  std::size_t n = 0;
  for (auto& c : counts) {
    c = r.u32();
    n += c;
  }
  REIS_CHECK(r.remaining() == n * 4, kFormat,
             "IVF index: member block holds " << r.remaining() << " bytes, expected " << n * 4);
  std::vector<std::uint32_t> assignments(n, nlist);
  for (std::uint32_t c = 0; c < nlist; ++c) {
    for (std::uint32_t j = 0; j < counts[c]; ++j) {
      const std::uint32_t i = r.u32();
      REIS_CHECK(i < n && assignments[i] == nlist, kFormat,
                 "IVF index: member " << i << " out of range or duplicated");
      assignments[i] = c;
    }
  }
  IvfIndex index = from_parts(vdb::VectorSet(dim, std::move(cdata)), std::move(assignments));
  index.validate();
  return index;
}

}  // namespace reis::ivf
