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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "engine/latency_model.hpp"
#include "engine/select.hpp"
#include "engine/trace.hpp"
#include "layout/device.hpp"
#include "vectordb/vectors.hpp"

namespace reis::engine {

using ssd::Picojoules;

struct SearchParams {
  std::uint32_t k = 10;
  std::uint32_t nprobe = 1;
  std::uint32_t candidate_multiplier = 10;
  std::optional<std::uint32_t> filter_threshold;  // Hamming bound, used when enable_df
  bool enable_df = false;
  bool enable_pl = false;
  bool enable_mpibc = false;

  std::uint32_t candidates() const { return k * candidate_multiplier; }
  void validate() const;
};

struct SearchMetrics {
  StageTimes latency;
  Picojoules energy_pj = 0;
  std::uint64_t entries_scanned = 0;
  std::uint64_t entries_transferred = 0;
  std::uint64_t entries_filtered = 0;
  std::uint64_t pages_read = 0;
  std::uint64_t channel_bytes = 0;
  std::uint32_t iterations = 0;

  double latency_us() const { return ssd::ns_to_us(latency.total()); }
  double energy_uj() const { return static_cast<double>(energy_pj) / 1e6; }
  SearchMetrics& operator+=(const SearchMetrics& o);
};

struct ResultItem {
  std::uint32_t dataset_index = 0;
  std::int64_t distance = 0;  // INT8 squared L2
  std::string document;
};

struct SearchResult {
  std::vector<ResultItem> topk;
  SearchMetrics metrics;
  std::vector<std::uint32_t> probed_clusters;  // nearest first; empty for flat databases
  std::uint32_t candidates = 0;
};

/// A contiguous run of item indices [first, last] inside a sub-region.
struct IndexRange {
  std::uint64_t first = 0;
  std::uint64_t last = 0;
};

/// IBC latency: each channel serially sends one page to every die (every
/// plane without MPIBC); channels run in parallel.
Nanos ibc_latency(const ssd::SsdConfig& cfg, bool mpibc);

/// The in-storage search executive. Holds per-plane latches, so one engine
/// serves one search at a time; use separate engines for concurrent searches.
class Engine {
 public:
  explicit Engine(const layout::SsdDevice& device);

  SearchResult search(vdb::Fp32View query, std::uint8_t db_id, const SearchParams& params,
                      const TraceSink& trace = {});

  /// Fills every plane's cache latch with copies of `query_bits`.
  Nanos input_broadcast(std::span<const std::uint8_t> query_bits, bool mpibc,
                        SearchMetrics& metrics, const TraceSink& trace = {});

  /// Scans the centroid sub-region and returns the nprobe nearest TTL-C entries,
  /// ordered by (dist, eadr). Requires a prior input_broadcast.
  std::vector<TtlEntryC> coarse_search(const layout::DeployedDatabase& db,
                                       const SearchParams& params, SearchMetrics& metrics,
                                       std::vector<IterationCost>& costs,
                                       const TraceSink& trace = {});

  /// Scans `ranges` of the binary sub-region and returns up to candidates()
  /// TTL-E entries, unordered. Requires a prior input_broadcast.
  std::vector<TtlEntryE> fine_search(const layout::DeployedDatabase& db,
                                     std::span<const IndexRange> ranges,
                                     const SearchParams& params, SearchMetrics& metrics,
                                     std::vector<IterationCost>& costs,
                                     const TraceSink& trace = {});

  /// INT8 rerank of `candidates`, sorted by (distance, dataset index), cut to k.
  /// `dadrs` receives the document address of each winner.
  std::vector<ResultItem> rerank(const layout::DeployedDatabase& db,
                                 std::span<const TtlEntryE> candidates,
                                 std::span<const std::int8_t> query_int8, std::uint32_t k,
                                 SearchMetrics& metrics, std::vector<std::uint32_t>& dadrs,
                                 const TraceSink& trace = {});

  /// Reads each winner's document chunk.
  void fetch_documents(const layout::DeployedDatabase& db, std::span<ResultItem> items,
                       std::span<const std::uint32_t> dadrs, SearchMetrics& metrics,
                       const TraceSink& trace = {});

  const std::vector<ssd::PlaneBuffer>& plane_buffers() const { return buffers_; }
  const layout::SsdDevice& device() const { return device_; }

 private:
  template <class OnSlot, class OnIteration>
  void scan(const layout::SubRegion& region, std::span<const IndexRange> ranges, Phase phase,
            std::optional<std::uint32_t> threshold, std::uint32_t wire_bytes,
            SearchMetrics& metrics, std::vector<IterationCost>& costs, const TraceSink& trace,
            OnSlot on_slot, OnIteration on_iteration);
  void emit(const TraceSink& trace, TraceEvent e);

  const layout::SsdDevice& device_;
  std::vector<ssd::PlaneBuffer> buffers_;
  std::uint64_t seq_ = 0;
};

/// Smallest Hamming threshold at which, over `sample`, at least
/// `target_keep_fraction` of the database entries pass, raised so that every
/// sample query keeps its `guard_rank` nearest binary neighbors. A target of 1
/// or more disables filtering and returns D.
std::uint32_t calibrate_filter_threshold(const layout::SsdDevice& device,
                                         const layout::DeployedDatabase& db,
                                         const vdb::VectorSet& sample, double target_keep_fraction,
                                         std::uint32_t guard_rank);

}  // namespace reis::engine
