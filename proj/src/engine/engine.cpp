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

#include "engine/engine.hpp"

#include <algorithm>
#include <bitset>
#include <cmath>
#include <map>

#include "common/error.hpp"
#include "vectordb/distance.hpp"
#include "vectordb/quantizer.hpp"

namespace reis::engine {

namespace {

using layout::DeployedDatabase;
using layout::SubRegion;

Picojoules uj_to_pj(double uj) { return static_cast<Picojoules>(std::llround(uj * 1e6)); }

Picojoules channel_energy(std::uint64_t bytes, const ssd::EnergyParams& e) {
  return static_cast<Picojoules>(
      std::llround(static_cast<double>(bytes) * e.e_channel_nj_per_byte * 1e3));
}

Picojoules core_energy(Nanos ns, const ssd::EnergyParams& e) {
  return static_cast<Picojoules>(std::llround(static_cast<double>(ns) * e.e_core_active_mw));
}

std::uint64_t cache_lines(std::uint64_t bytes) { return (bytes + 63) / 64; }

Nanos dram_time(std::uint64_t bytes, const ssd::TimingParams& t) {
  return static_cast<Nanos>(
      std::llround(static_cast<double>(cache_lines(bytes)) * t.t_dram_access_ns));
}

Picojoules dram_energy(std::uint64_t bytes, const ssd::EnergyParams& e) {
  return static_cast<Picojoules>(
      std::llround(static_cast<double>(cache_lines(bytes)) * e.e_dram_nj_per_64b * 1e3));
}

Nanos sense_time(ssd::CellMode mode, const ssd::TimingParams& t) {
  return ssd::us_to_ns(mode == ssd::CellMode::kSlc ? t.t_read_page_us : t.t_read_tlc_us);
}

/// Page reads spread over planes and bytes spread over channels, for the
/// plain-read phases (rerank and document fetch).
struct ReadBatch {
  std::map<std::uint64_t, ssd::CellMode> pages;
  std::map<std::uint32_t, std::uint64_t> channel_bytes;

  Nanos array_time(const ssd::FlashArray& flash, const ssd::TimingParams& t) const {
    std::map<std::uint32_t, Nanos> per_plane;
    for (const auto& [page, mode] : pages) per_plane[flash.plane_of(page)] += sense_time(mode, t);
    Nanos worst = 0;
    for (const auto& [plane, ns] : per_plane) worst = std::max(worst, ns);
    return worst;
  }
  Nanos transfer_time(const ssd::TimingParams& t) const {
    Nanos worst = 0;
    for (const auto& [ch, bytes] : channel_bytes) {
      worst = std::max(worst, ssd::channel_transfer_time(bytes, t.channel_bw_gbps));
    }
    return worst;
  }
  std::uint64_t total_bytes() const {
    std::uint64_t s = 0;
    for (const auto& [ch, bytes] : channel_bytes) s += bytes;
    return s;
  }
};

}  // namespace

void SearchParams::validate() const {
  REIS_CHECK(k >= 1, kInvalidArgument, "search: k must be >= 1");
  REIS_CHECK(candidate_multiplier >= 1, kInvalidArgument,
             "search: candidate multiplier must be >= 1");
  REIS_CHECK(nprobe >= 1, kInvalidArgument, "search: nprobe must be >= 1");
  REIS_CHECK(!enable_df || filter_threshold.has_value(), kInvalidArgument,
             "search: distance filtering needs a threshold");
}

SearchMetrics& SearchMetrics::operator+=(const SearchMetrics& o) {
  latency += o.latency;
  energy_pj += o.energy_pj;
  entries_scanned += o.entries_scanned;
  entries_transferred += o.entries_transferred;
  entries_filtered += o.entries_filtered;
  pages_read += o.pages_read;
  channel_bytes += o.channel_bytes;
  iterations += o.iterations;
  return *this;
}

Nanos ibc_latency(const ssd::SsdConfig& cfg, bool mpibc) {
  const auto& g = cfg.geometry;
  const Nanos page = ssd::channel_transfer_time(g.page_size, cfg.timing.channel_bw_gbps);
  return page * g.dies_per_channel * (mpibc ? 1 : g.planes_per_die);
}

Engine::Engine(const layout::SsdDevice& device) : device_(device) {
  const auto& g = device_.geometry();
  buffers_.reserve(g.total_planes());
  for (std::uint32_t p = 0; p < g.total_planes(); ++p) buffers_.emplace_back(g);
}

void Engine::emit(const TraceSink& trace, TraceEvent e) {
  if (!trace) return;
  e.seq = seq_++;
  trace(e);
}

Nanos Engine::input_broadcast(std::span<const std::uint8_t> query_bits, bool mpibc,
                              SearchMetrics& metrics, const TraceSink& trace) {
  const auto& cfg = device_.config();
  const auto& g = cfg.geometry;
  REIS_CHECK(!query_bits.empty() && query_bits.size() <= g.page_size, kInvalidArgument,
             "IBC: query of " << query_bits.size() << " B");
  const auto copies = static_cast<std::uint32_t>(g.page_size / query_bits.size());
  for (auto& buf : buffers_) ssd::fill_cache_latch(buf, query_bits, copies);

  const Nanos per_page = ssd::channel_transfer_time(g.page_size, cfg.timing.channel_bw_gbps);
  const std::uint32_t sends_per_die = mpibc ? 1 : g.planes_per_die;
  if (trace) {
    for (std::uint32_t ch = 0; ch < g.channels; ++ch) {
      for (std::uint32_t die = 0; die < g.dies_per_channel; ++die) {
        TraceEvent e;
        e.phase = Phase::kIbc;
        e.command = FlashCommand::kIbc;
        e.channel = ch;
        e.plane = ch + g.channels * die;  // plane 0 of the die
        e.value = std::uint64_t{g.page_size} * sends_per_die;
        e.latency_ns = per_page * sends_per_die;
        emit(trace, e);
      }
    }
  }
  const std::uint64_t bytes =
      std::uint64_t{g.page_size} * sends_per_die * g.dies_per_channel * g.channels;
  metrics.channel_bytes += bytes;
  metrics.energy_pj += channel_energy(bytes, cfg.energy);
  const Nanos t = ibc_latency(cfg, mpibc);
  metrics.latency.ibc += t;
  return t;
}

template <class OnSlot, class OnIteration>
void Engine::scan(const SubRegion& region, std::span<const IndexRange> ranges, Phase phase,
                  std::optional<std::uint32_t> threshold, std::uint32_t wire_bytes,
                  SearchMetrics& metrics, std::vector<IterationCost>& costs,
                  const TraceSink& trace, OnSlot on_slot, OnIteration on_iteration) {
  const auto& cfg = device_.config();
  const auto& g = cfg.geometry;
  const auto& t = cfg.timing;
  const auto& flash = device_.flash();
  REIS_CHECK(!region.empty(), kInvalidArgument, "scan: region is empty");
  REIS_CHECK(region.pages_per_item == 1, kInternal, "scan: embeddings must fit a page");

  // Valid slots per page, from the requested index ranges.
  using Mask = std::bitset<ssd::kMaxSlotsPerPage>;
  std::map<std::uint64_t, Mask> masks;
  for (const auto& r : ranges) {
    REIS_CHECK(r.first <= r.last && r.last < region.items, kOutOfRange,
               "scan: range [" << r.first << ", " << r.last << "] outside " << region.items
                               << " items");
    std::uint64_t page = region.page_of(r.first);
    for (;;) {
      std::optional<std::uint64_t> next;
      const std::uint64_t page_first = (page - region.first_page) * region.slots_per_page;
      const std::uint64_t lo = std::max(r.first, page_first);
      const std::uint64_t hi = std::min(r.last, page_first + region.slots_per_page - 1);
      Mask& m = masks[page];
      for (std::uint64_t i = lo; i <= hi; ++i) m.set(i - page_first);
      if (hi == r.last) break;
      next = layout::next_page_address(page, region);
      REIS_CHECK(next.has_value(), kInternal, "scan: ran past the region end");
      page = *next;
    }
  }

  const std::uint32_t planes = g.total_planes();
  std::vector<std::vector<std::uint64_t>> plane_pages(planes);
  for (const auto& [page, mask] : masks) plane_pages[flash.plane_of(page)].push_back(page);
  std::size_t rounds = 0;
  for (const auto& pp : plane_pages) rounds = std::max(rounds, pp.size());

  const Nanos t_count = ssd::us_to_ns(t.t_bit_count_us);
  const Picojoules e_read = uj_to_pj(cfg.energy.e_read_page_uj);
  const Picojoules e_latch = uj_to_pj(cfg.energy.e_latch_op_uj);
  std::vector<std::uint64_t> channel_bytes(g.channels);

  for (std::size_t it = 0; it < rounds; ++it) {
    IterationCost cost;
    std::fill(channel_bytes.begin(), channel_bytes.end(), 0);
    std::uint64_t new_entries = 0;
    for (std::uint32_t plane = 0; plane < planes; ++plane) {
      if (it >= plane_pages[plane].size()) continue;
      const std::uint64_t page = plane_pages[plane][it];
      const Mask& mask = masks.at(page);
      auto& buf = buffers_[plane];
      const std::uint32_t channel = g.locate(plane).channel;

      const Nanos read = ssd::read_page(flash, buf, plane, page, t);
      const Nanos x = ssd::latch_xor(buf, t);
      const auto valid = static_cast<std::uint32_t>(mask.count());
      const Nanos count = t_count * valid;
      cost.sense = std::max(cost.sense, read + x);
      cost.count = std::max(cost.count, count);
      cost.array = std::max(cost.array, read + x + count);
      metrics.pages_read += 1;
      metrics.energy_pj += e_read + e_latch * 2;

      const std::uint64_t page_first = (page - region.first_page) * region.slots_per_page;
      std::uint32_t passed = 0;
      for (std::uint32_t s = 0; s < region.slots_per_page; ++s) {
        if (!mask.test(s)) continue;
        const std::uint32_t dist = ssd::count_fail_bits(buf, s, region.item_bytes);
        ++metrics.entries_scanned;
        if (threshold && !ssd::pass_fail_compare(dist, *threshold)) {
          ++metrics.entries_filtered;
          continue;
        }
        ++passed;
        ++metrics.entries_transferred;
        const auto emb = std::span<const std::uint8_t>(buf.sensing)
                             .subspan(std::size_t{s} * region.item_bytes, region.item_bytes);
        on_slot(page, s, page_first + s, static_cast<std::uint16_t>(dist), emb,
                std::span<const std::uint8_t>(buf.oob));
      }
      channel_bytes[channel] += std::uint64_t{passed} * wire_bytes;
      new_entries += passed;

      if (trace) {
        TraceEvent e;
        e.phase = phase;
        e.iteration = static_cast<std::uint32_t>(it);
        e.channel = channel;
        e.plane = plane;
        e.page = page;
        e.command = FlashCommand::kXor;
        e.latency_ns = read + x;
        emit(trace, e);
        e.command = FlashCommand::kGenDist;
        e.value = valid;
        e.latency_ns = count;
        emit(trace, e);
        if (passed > 0) {
          e.command = FlashCommand::kRdTtl;
          e.value = passed;
          e.latency_ns = ssd::channel_transfer_time(std::uint64_t{passed} * wire_bytes,
                                                    t.channel_bw_gbps);
          emit(trace, e);
        }
      }
    }
    std::uint64_t moved = 0;
    for (std::uint64_t b : channel_bytes) {
      cost.transfer = std::max(cost.transfer, ssd::channel_transfer_time(b, t.channel_bw_gbps));
      moved += b;
    }
    if (new_entries > 0) {
      const Nanos core = on_iteration(new_entries);
      cost.select = core + dram_time(moved, t);
      metrics.energy_pj += core_energy(core, cfg.energy) + dram_energy(moved, cfg.energy);
    }
    metrics.channel_bytes += moved;
    metrics.energy_pj += channel_energy(moved, cfg.energy);
    costs.push_back(cost);
  }
  metrics.iterations += static_cast<std::uint32_t>(rounds);
}

std::vector<TtlEntryC> Engine::coarse_search(const DeployedDatabase& db,
                                             const SearchParams& params, SearchMetrics& metrics,
                                             std::vector<IterationCost>& costs,
                                             const TraceSink& trace) {
  REIS_CHECK(db.mode == layout::DeployMode::kIvf, kInvalidArgument,
             "coarse search needs an IVF database");
  REIS_CHECK(params.nprobe >= 1 && params.nprobe <= db.nlist(), kInvalidArgument,
             "nprobe " << params.nprobe << " outside [1, " << db.nlist() << "]");
  const auto& t = device_.config().timing;
  std::vector<TtlEntryC> ttl;
  const IndexRange all{0, db.centroids.items - 1};
  scan(
      db.centroids, std::span<const IndexRange>(&all, 1), Phase::kCoarse, std::nullopt,
      wire_bytes_c(db.centroids.item_bytes), metrics, costs, trace,
      [&](std::uint64_t page, std::uint32_t slot, std::uint64_t, std::uint16_t dist,
          std::span<const std::uint8_t> emb, std::span<const std::uint8_t> oob) {
        TtlEntryC e;
        e.dist = dist;
        e.emb.assign(emb.begin(), emb.end());
        e.eadr = {page, slot};
        e.tag = layout::read_oob_tag(oob, slot);
        ttl.push_back(std::move(e));
      },
      [&](std::uint64_t) {
        const Nanos core = select_time(ttl.size(), t);
        quickselect_smallest(ttl, params.nprobe, ByDistEadr{});
        return core;
      });
  std::sort(ttl.begin(), ttl.end(), ByDistEadr{});
  return ttl;
}

std::vector<TtlEntryE> Engine::fine_search(const DeployedDatabase& db,
                                           std::span<const IndexRange> ranges,
                                           const SearchParams& params, SearchMetrics& metrics,
                                           std::vector<IterationCost>& costs,
                                           const TraceSink& trace) {
  const auto& t = device_.config().timing;
  const std::size_t m = params.candidates();
  const bool radr = db.stores_radr();
  std::optional<std::uint32_t> threshold;
  if (params.enable_df) threshold = params.filter_threshold;
  std::vector<TtlEntryE> ttl;
  scan(
      db.binary, ranges, Phase::kFine, threshold, wire_bytes_e(db.binary.item_bytes), metrics,
      costs, trace,
      [&](std::uint64_t, std::uint32_t slot, std::uint64_t index, std::uint16_t dist,
          std::span<const std::uint8_t> emb, std::span<const std::uint8_t> oob) {
        const auto link =
            layout::read_oob_link(oob, slot, radr, static_cast<std::uint32_t>(index));
        TtlEntryE e;
        e.dist = dist;
        e.emb.assign(emb.begin(), emb.end());
        e.radr = link.radr;
        e.dadr = link.dadr;
        ttl.push_back(std::move(e));
      },
      [&](std::uint64_t) {
        const Nanos core = select_time(ttl.size(), t);
        quickselect_smallest(ttl, m, ByDistRadr{});
        return core;
      });
  return ttl;
}

std::vector<ResultItem> Engine::rerank(const DeployedDatabase& db,
                                       std::span<const TtlEntryE> candidates,
                                       std::span<const std::int8_t> query_int8, std::uint32_t k,
                                       SearchMetrics& metrics, std::vector<std::uint32_t>& dadrs,
                                       const TraceSink& trace) {
  const auto& cfg = device_.config();
  const auto& g = cfg.geometry;
  const auto& t = cfg.timing;
  const auto& flash = device_.flash();
  REIS_CHECK(query_int8.size() == db.dim, kDimensionMismatch,
             "rerank: query D=" << query_int8.size() << " vs database D=" << db.dim);

  struct Scored {
    std::int64_t dist;
    std::uint32_t index;
    std::uint32_t dadr;
  };
  std::vector<Scored> scored;
  scored.reserve(candidates.size());
  ReadBatch batch;
  for (const auto& c : candidates) {
    const std::uint64_t first = db.int8.page_of(c.radr);
    const std::uint64_t offset = std::uint64_t{db.int8.slot_of(c.radr)} * db.dim;
    std::uint64_t remaining = db.dim;
    for (std::uint32_t p = 0; p < db.int8.pages_per_item; ++p) {
      const std::uint64_t page = first + p;
      batch.pages.emplace(page, db.int8.mode);
      const std::uint64_t on_page =
          std::min<std::uint64_t>(remaining, g.page_size - (p == 0 ? offset : 0));
      batch.channel_bytes[g.locate(flash.plane_of(page)).channel] += on_page;
      remaining -= on_page;
    }
    const auto twin = device_.int8_embedding(db, c.radr);
    scored.push_back({vdb::int8_squared_l2(query_int8, twin), db.position_to_dataset[c.radr],
                      c.dadr});
  }
  quicksort(std::span<Scored>(scored), [](const Scored& a, const Scored& b) {
    return a.dist != b.dist ? a.dist < b.dist : a.index < b.index;
  });
  if (scored.size() > k) scored.resize(k);

  const Nanos array = batch.array_time(flash, t);
  const Nanos transfer = batch.transfer_time(t);
  const std::uint64_t macs = std::uint64_t{db.dim} * candidates.size();
  const Nanos compute = static_cast<Nanos>(
      std::llround(static_cast<double>(macs) * 1000.0 / t.core_int8_macs_per_us));
  const Nanos sort = sort_time(candidates.size(), t);
  metrics.latency.rerank += array + transfer + compute + sort;
  metrics.pages_read += batch.pages.size();
  metrics.channel_bytes += batch.total_bytes();
  metrics.energy_pj += uj_to_pj(cfg.energy.e_read_page_uj) *
                           static_cast<Picojoules>(batch.pages.size()) +
                       channel_energy(batch.total_bytes(), cfg.energy) +
                       core_energy(compute + sort, cfg.energy);
  if (trace) {
    for (const auto& [page, mode] : batch.pages) {
      TraceEvent e;
      e.phase = Phase::kRerank;
      e.command = FlashCommand::kRead;
      e.plane = flash.plane_of(page);
      e.channel = g.locate(e.plane).channel;
      e.page = page;
      e.latency_ns = sense_time(mode, t);
      emit(trace, e);
    }
  }

  std::vector<ResultItem> out;
  dadrs.clear();
  for (const auto& s : scored) {
    out.push_back({s.index, s.dist, {}});
    dadrs.push_back(s.dadr);
  }
  return out;
}

void Engine::fetch_documents(const DeployedDatabase& db, std::span<ResultItem> items,
                             std::span<const std::uint32_t> dadrs, SearchMetrics& metrics,
                             const TraceSink& trace) {
  const auto& cfg = device_.config();
  const auto& g = cfg.geometry;
  const auto& t = cfg.timing;
  const auto& flash = device_.flash();
  REIS_CHECK(items.size() == dadrs.size(), kInternal, "document fetch: address count mismatch");
  ReadBatch batch;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto doc = device_.lookup_document(db, dadrs[i]);
    items[i].document.assign(doc.chunk);
    batch.pages.emplace(doc.page, ssd::CellMode::kTlc);
    batch.channel_bytes[g.locate(doc.plane).channel] += doc.chunk.size();
  }
  const std::uint64_t bytes = batch.total_bytes();
  const Nanos host = ssd::channel_transfer_time(bytes, t.host_link_bw_gbps);
  metrics.latency.doc_fetch += batch.array_time(flash, t) + batch.transfer_time(t) + host;
  metrics.pages_read += batch.pages.size();
  metrics.channel_bytes += bytes;
  metrics.energy_pj += uj_to_pj(cfg.energy.e_read_page_uj) *
                           static_cast<Picojoules>(batch.pages.size()) +
                       channel_energy(bytes, cfg.energy);
  if (trace) {
    for (const auto& [page, mode] : batch.pages) {
      TraceEvent e;
      e.phase = Phase::kDocFetch;
      e.command = FlashCommand::kRead;
      e.plane = flash.plane_of(page);
      e.channel = g.locate(e.plane).channel;
      e.page = page;
      e.latency_ns = sense_time(mode, t);
      emit(trace, e);
    }
  }
}

SearchResult Engine::search(vdb::Fp32View query, std::uint8_t db_id, const SearchParams& params,
                            const TraceSink& trace) {
  params.validate();
  const DeployedDatabase& db = device_.database(db_id);
  REIS_CHECK(query.size() == db.dim, kDimensionMismatch,
             "search: query D=" << query.size() << " vs database D=" << db.dim);
  REIS_CHECK(params.k <= db.size, kInvalidArgument,
             "search: k=" << params.k << " exceeds the " << db.size << "-entry database");
  const auto& t = device_.config().timing;

  const vdb::BitVector qbits = vdb::binarize(query, db.quantizer);
  const vdb::Int8Vector qint8 = vdb::quantize_int8(query, db.quantizer);

  SearchResult result;
  SearchMetrics& m = result.metrics;
  input_broadcast(qbits.view(), params.enable_mpibc, m, trace);

  std::vector<IndexRange> ranges;
  if (db.mode == layout::DeployMode::kIvf) {
    std::vector<IterationCost> costs;
    const auto clusters = coarse_search(db, params, m, costs, trace);
    m.latency += phase_latency(costs, params.enable_pl, t.overlap_count_with_read);
    for (const auto& c : clusters) {
      const auto id = static_cast<std::uint32_t>(db.centroids.index_of(c.eadr));
      const auto& entry = db.rivf.at(id);
      REIS_CHECK(entry.tag == c.tag, kInternal,
                 "cluster " << id << " tag " << int{c.tag} << " disagrees with R-IVF tag "
                            << int{entry.tag});
      result.probed_clusters.push_back(id);
      ranges.push_back({entry.first_emb_index, entry.last_emb_index});
    }
  } else {
    ranges.push_back({0, db.size - 1});
  }

  std::vector<IterationCost> costs;
  const auto candidates = fine_search(db, ranges, params, m, costs, trace);
  m.latency += phase_latency(costs, params.enable_pl, t.overlap_count_with_read);
  result.candidates = static_cast<std::uint32_t>(candidates.size());

  std::vector<std::uint32_t> dadrs;
  result.topk = rerank(db, candidates, qint8.view(), params.k, m, dadrs, trace);
  fetch_documents(db, result.topk, dadrs, m, trace);
  return result;
}

std::uint32_t calibrate_filter_threshold(const layout::SsdDevice& device,
                                         const DeployedDatabase& db, const vdb::VectorSet& sample,
                                         double target_keep_fraction, std::uint32_t guard_rank) {
  REIS_CHECK(!sample.empty(), kInvalidArgument, "calibration: no sample queries");
  REIS_CHECK(sample.dim() == db.dim, kDimensionMismatch,
             "calibration: sample D=" << sample.dim() << " vs database D=" << db.dim);
  REIS_CHECK(target_keep_fraction >= 0.0, kInvalidArgument,
             "calibration: negative keep fraction");
  if (target_keep_fraction >= 1.0) return db.dim;

  const std::uint64_t rank = std::min<std::uint64_t>(std::max<std::uint32_t>(guard_rank, 1), db.size);
  std::vector<std::uint64_t> total(db.dim + 1, 0);
  std::vector<std::uint64_t> hist(db.dim + 1);
  std::uint32_t guard = 0;
  for (std::size_t q = 0; q < sample.size(); ++q) {
    const auto bits = vdb::binarize(sample.row(q), db.quantizer);
    std::fill(hist.begin(), hist.end(), 0);
    for (std::uint64_t pos = 0; pos < db.size; ++pos) {
      ++hist[vdb::hamming_distance(bits.view(), device.binary_embedding(db, pos))];
    }
    std::uint64_t cum = 0;
    for (std::uint32_t d = 0; d <= db.dim; ++d) {
      cum += hist[d];
      total[d] += hist[d];
      if (cum >= rank) {
        guard = std::max(guard, d);
        for (std::uint32_t e = d + 1; e <= db.dim; ++e) total[e] += hist[e];
        break;
      }
    }
  }
  const double need = target_keep_fraction * static_cast<double>(db.size) *
                      static_cast<double>(sample.size());
  std::uint64_t cum = 0;
  std::uint32_t keep = db.dim;
  for (std::uint32_t d = 0; d <= db.dim; ++d) {
    cum += total[d];
    if (static_cast<double>(cum) >= need) {
      keep = d;
      break;
    }
  }
  return std::max(keep, guard);
}

}  // namespace reis::engine
