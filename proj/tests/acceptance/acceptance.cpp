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


// Acceptance run: one PASS/FAIL line per criterion, printed in order at the end.
// Progress notes go to stderr. Exit status is non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dataset/dataset.hpp"
#include "engine/engine.hpp"
#include "engine/select.hpp"
#include "host/baseline.hpp"
#include "ivf/ivf_index.hpp"
#include "layout/device.hpp"
#include "layout/records.hpp"
#include "ssd/flash.hpp"
#include "support/oracles.hpp"
#include "vectordb/quantizer.hpp"

using namespace reis;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::uint32_t kDim = 1024;
constexpr std::uint64_t kN = 100000;
constexpr std::uint64_t kQueries = 100;
constexpr std::uint32_t kK = 10;
constexpr std::uint32_t kNlist = 316;
constexpr std::uint64_t kSeed = 20260101;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Line {
  int id = 0;
  std::string name;
  double budget_s = 0;
  double elapsed_s = 0;
  Outcome outcome;
};

std::vector<Line> g_lines;

void note(const std::string& s) { std::fprintf(stderr, "[acceptance] %s\n", s.c_str()); }

/// Runs `body`, timing it against `budget_s`; an exception or an overrun fails the criterion.
void criterion(int id, std::string name, double budget_s, const std::function<Outcome()>& body) {
  note("criterion " + std::to_string(id) + ": " + name);
  Line line{id, std::move(name), budget_s, 0, {}};
  const auto t0 = Clock::now();
  try {
    line.outcome = body();
  } catch (const std::exception& e) {
    line.outcome = {false, std::string("exception: ") + e.what()};
  }
  line.elapsed_s = std::chrono::duration<double>(Clock::now() - t0).count();
  if (line.elapsed_s > budget_s) {
    line.outcome.pass = false;
    line.outcome.detail += "; over the time budget";
  }
  g_lines.push_back(std::move(line));
}

std::string fmt(double v, int prec = 3) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(prec);
  s << v;
  return s.str();
}

// ------------------------------------------------------------ shared state

struct Shared {
  dataset::SyntheticDataset data;        // 200 queries: 0..99 evaluation, 100..199 calibration
  vdb::VectorSet eval_queries;
  vdb::VectorSet calib_queries;
  host::GroundTruth truth;
  vdb::QuantizerModel quantizer;
  std::unique_ptr<layout::SsdDevice> ssd1;
  std::unique_ptr<layout::SsdDevice> ssd2;
  std::unique_ptr<layout::SsdDevice> ivf;
  std::optional<std::uint32_t> threshold;  // calibrated
  double setup_s = 0;
};

Shared g;

vdb::VectorSet slice(const vdb::VectorSet& v, std::size_t first, std::size_t count) {
  vdb::VectorSet out(v.dim());
  for (std::size_t i = first; i < first + count; ++i) out.push_back(v.row(i));
  return out;
}

void prepare_dataset() {
  const auto t0 = Clock::now();
  dataset::GeneratorParams p;
  p.n = kN;
  p.dim = kDim;
  p.clusters = 100;
  p.latent_dim = 16;
  p.spread = 1.0;
  p.noise = 0.1;
  p.queries = 2 * kQueries;
  p.seed = kSeed;
  p.doc_min_bytes = 4097;  // every chunk takes a whole page
  p.doc_max_bytes = 4400;
  g.data = dataset::generate(p);
  g.eval_queries = slice(g.data.queries, 0, kQueries);
  g.calib_queries = slice(g.data.queries, kQueries, kQueries);
  g.truth = host::exact_ground_truth(g.eval_queries, g.data.vectors, kK);
  g.quantizer = vdb::train_quantizer(g.data.vectors);
  g.setup_s += std::chrono::duration<double>(Clock::now() - t0).count();
  note("dataset ready in " + fmt(g.setup_s, 1) + " s");
}

std::unique_ptr<layout::SsdDevice> deploy_flat(const std::string& preset) {
  auto dev = std::make_unique<layout::SsdDevice>(ssd::preset_config(preset));
  dev->deploy_flat(0, g.data.vectors, g.data.documents, g.quantizer);
  return dev;
}

std::vector<std::uint32_t> ids(const engine::SearchResult& r) {
  std::vector<std::uint32_t> out;
  for (const auto& it : r.topk) out.push_back(it.dataset_index);
  return out;
}

engine::SearchParams flat_params(bool df, bool pl, bool mpibc) {
  engine::SearchParams p;
  p.k = kK;
  p.enable_df = df;
  p.enable_pl = pl;
  p.enable_mpibc = mpibc;
  if (df) p.filter_threshold = g.threshold.value_or(kDim);
  return p;
}

// --------------------------------------------------------------- criteria

Outcome kernel_exactness() {
  // 10^5 random pairs through the latch path: each page holds 128 embeddings
  // in the sensing latch against 128 different partners in the cache latch.
  testing::Gen gen(1);
  constexpr std::uint32_t kBytes = kDim / 8;
  constexpr std::uint64_t kPairs = 100000;
  const auto cfg = testing::toy_config(1, 1, 1, 1024, 1);
  ssd::FlashArray flash(cfg.geometry);
  const std::uint32_t slots = ssd::embeddings_per_page(cfg.geometry, kBytes);
  const std::uint64_t pages = (kPairs + slots - 1) / slots;
  auto& ext = flash.program(0, pages, ssd::CellMode::kSlc);
  for (auto& b : ext.data) b = static_cast<std::uint8_t>(gen.below(256));
  ssd::PlaneBuffer buf(cfg.geometry);
  std::uint64_t checked = 0, mismatches = 0;
  for (std::uint64_t page = 0; page < pages; ++page) {
    const auto partners = gen.bytes(cfg.geometry.page_size);
    std::copy(partners.begin(), partners.end(), buf.cache.begin());
    buf.cache_valid = true;
    ssd::read_page(flash, buf, 0, page, cfg.timing);
    ssd::latch_xor(buf, cfg.timing);
    const auto data = flash.page_data(page);
    for (std::uint32_t s = 0; s < slots && checked < kPairs; ++s, ++checked) {
      const std::vector<std::uint8_t> a(data.begin() + s * kBytes, data.begin() + (s + 1) * kBytes);
      const std::vector<std::uint8_t> b(partners.begin() + s * kBytes, partners.begin() + (s + 1) * kBytes);
      mismatches += ssd::count_fail_bits(buf, s, kBytes) != testing::naive_hamming(a, b);
    }
  }
  return {mismatches == 0 && checked == kPairs,
          std::to_string(checked) + " pairs, " + std::to_string(mismatches) + " mismatches"};
}

Outcome flat_oracle_equivalence() {
  if (g.data.vectors.empty()) prepare_dataset();
  g.ssd1 = deploy_flat("reis-ssd1");
  const auto& db = g.ssd1->database(0);
  host::HostCostModel m;
  m.hamming_vectors_per_us = m.int8_vectors_per_us = m.fp32_vectors_per_us = 1.0;
  host::HostParams hp;
  hp.k = kK;
  const auto oracle = host::host_search(*g.ssd1, db, g.eval_queries, hp, m);
  engine::Engine e(*g.ssd1);
  auto p = flat_params(true, false, false);
  p.filter_threshold = kDim;
  std::uint64_t differing = 0;
  for (std::size_t q = 0; q < kQueries; ++q) {
    differing += ids(e.search(g.eval_queries.row(q), 0, p)) != oracle.indices[q];
  }
  return {differing == 0, std::to_string(kQueries - differing) + "/" + std::to_string(kQueries) +
                              " queries identical (setup " + fmt(g.setup_s, 1) + " s)"};
}

Outcome filtering() {
  const auto& db = g.ssd1->database(0);
  const std::uint32_t guard = kK * engine::SearchParams{}.candidate_multiplier;
  g.threshold = engine::calibrate_filter_threshold(*g.ssd1, db, g.calib_queries, 0.01, guard);
  engine::Engine e(*g.ssd1);
  auto open = flat_params(true, false, false);
  open.filter_threshold = kDim;
  const auto cut = flat_params(true, false, false);
  host::GroundTruth base_ids, df_ids;
  std::uint64_t scanned = 0, transferred = 0;
  for (std::size_t q = 0; q < kQueries; ++q) {
    base_ids.push_back(ids(e.search(g.eval_queries.row(q), 0, open)));
    const auto r = e.search(g.eval_queries.row(q), 0, cut);
    df_ids.push_back(ids(r));
    scanned += r.metrics.entries_scanned;
    transferred += r.metrics.entries_transferred;
  }
  const double base = host::mean_recall_at_k(base_ids, g.truth, kK);
  const double df = host::mean_recall_at_k(df_ids, g.truth, kK);
  const double frac = static_cast<double>(transferred) / static_cast<double>(scanned);
  return {frac <= 0.05 && df == base,
          "threshold " + std::to_string(*g.threshold) + " (calibrated on held-out queries), " +
              fmt(100 * frac, 2) + "% transferred, recall " + fmt(df) + " vs " + fmt(base)};
}

Outcome mpibc_ratio() {
  std::string detail;
  bool ok = true;
  for (const auto& name : ssd::preset_names()) {
    const auto cfg = ssd::preset_config(name);
    const auto without = engine::ibc_latency(cfg, false);
    const auto with = engine::ibc_latency(cfg, true);
    ok = ok && with > 0 && without == with * cfg.geometry.planes_per_die;
    detail += name + " " + std::to_string(without) + "/" + std::to_string(with) + " ns = " +
              fmt(static_cast<double>(without) / static_cast<double>(with), 1) + "; ";
  }
  return {ok, detail};
}

struct OptRun {
  std::vector<double> latency_us[4];  // none, df, df+pl, df+pl+mpibc
  double mean(int i) const {
    double s = 0;
    for (double v : latency_us[i]) s += v;
    return s / static_cast<double>(latency_us[i].size());
  }
  double qps(int i) const { return 1e6 / mean(i); }
};

OptRun g_opt[2];

Outcome optimization_ordering() {
  g.ssd2 = deploy_flat("reis-ssd2");
  const engine::SearchParams configs[4] = {flat_params(false, false, false), flat_params(true, false, false),
                                           flat_params(true, true, false), flat_params(true, true, true)};
  bool ordered = true;
  std::string detail;
  for (int d = 0; d < 2; ++d) {
    engine::Engine e(d == 0 ? *g.ssd1 : *g.ssd2);
    for (std::size_t q = 0; q < kQueries; ++q) {
      for (int c = 0; c < 4; ++c) {
        g_opt[d].latency_us[c].push_back(e.search(g.eval_queries.row(q), 0, configs[c]).metrics.latency_us());
      }
      for (int c = 1; c < 4; ++c) ordered = ordered && g_opt[d].latency_us[c][q] <= g_opt[d].latency_us[c - 1][q];
    }
    detail += std::string(d == 0 ? "reis-ssd1" : "reis-ssd2") + " mean us " + fmt(g_opt[d].mean(0), 1) + " / " +
              fmt(g_opt[d].mean(1), 1) + " / " + fmt(g_opt[d].mean(2), 1) + " / " + fmt(g_opt[d].mean(3), 1) +
              " (DF " + fmt(g_opt[d].mean(0) / g_opt[d].mean(1), 2) + "x); ";
  }
  const bool df2x = g_opt[0].mean(0) >= 2 * g_opt[0].mean(1) && g_opt[1].mean(0) >= 2 * g_opt[1].mean(1);
  return {ordered && df2x, detail + (ordered ? "per-query order holds" : "per-query order violated")};
}

Outcome preset_dominance() {
  static const char* names[4] = {"none", "df", "df+pl", "df+pl+mpibc"};
  bool ok = true;
  std::string detail = "qps ratio ssd2/ssd1:";
  for (int c = 0; c < 4; ++c) {
    if (g_opt[0].latency_us[c].empty()) return {false, "no run data"};
    const double ratio = g_opt[1].qps(c) / g_opt[0].qps(c);
    ok = ok && ratio > 1.0;
    detail += std::string(" ") + names[c] + " " + fmt(ratio, 2);
  }
  g.ssd2.reset();
  return {ok, detail};
}

Outcome host_speedup() {
  const auto& db = g.ssd1->database(0);
  const auto image = db.image_bytes(g.ssd1->geometry());
  const auto model = host::calibrate(host::HostCostModel{}, kDim, kSeed);
  host::HostParams hp;
  hp.k = kK;
  const auto h = host::host_search(*g.ssd1, db, g.eval_queries, hp, model);
  const double host_us = h.latency_per_query_s() * 1e6;
  const double engine_us = g_opt[0].latency_us[3].empty() ? 0 : g_opt[0].mean(3);
  const double none_us = g_opt[0].latency_us[0].empty() ? 0 : g_opt[0].mean(0);
  const double speedup = engine_us > 0 ? host_us / engine_us : 0;
  return {image >= (1ull << 30) && speedup >= 5.0,
          "image " + fmt(static_cast<double>(image) / (1 << 30), 2) + " GiB, host " + fmt(host_us / 1000, 2) +
              " ms/query, engine " + fmt(engine_us / 1000, 3) + " ms/query, speedup " + fmt(speedup, 1) +
              "x (No-OPT " + fmt(none_us > 0 ? host_us / none_us : 0, 1) + "x)"};
}

Outcome ivf_recall() {
  const auto idx = ivf::build_index(g.data.vectors, {.nlist = kNlist, .seed = kSeed,
                                                      .max_training_points = 64 * kNlist});
  g.ivf = std::make_unique<layout::SsdDevice>(ssd::preset_config("reis-ssd1"));
  g.ivf->deploy_ivf(0, g.data.vectors, g.data.documents, idx, g.quantizer);
  engine::Engine e(*g.ivf);
  const std::uint32_t sweep[6] = {1, 2, 4, 8, 16, 32};
  double prev = -1;
  bool monotone = true, reached = false;
  std::string detail = "nlist " + std::to_string(kNlist) + ", recall by nprobe:";
  for (auto np : sweep) {
    engine::SearchParams p;
    p.k = kK;
    p.nprobe = np;
    host::GroundTruth got;
    for (std::size_t q = 0; q < kQueries; ++q) got.push_back(ids(e.search(g.eval_queries.row(q), 0, p)));
    const double r = host::mean_recall_at_k(got, g.truth, kK);
    monotone = monotone && r >= prev;
    reached = reached || r >= 0.90;
    prev = r;
    detail += " " + std::to_string(np) + "=" + fmt(r);
  }
  return {monotone && reached, detail};
}

Outcome metadata() {
  testing::Gen gen(9);
  bool ok = layout::pack_rdb({}).size() == 21 && layout::pack_rivf({}).size() == 15;
  std::uint64_t bad = 0;
  auto addr = [&] {
    return ssd::MiniPageAddress{gen.u64() & ssd::kMaxPageAddress, static_cast<std::uint32_t>(gen.below(128))};
  };
  for (int i = 0; i < 10000; ++i) {
    layout::RdbEntry e{static_cast<std::uint8_t>(gen.below(256)), addr(), addr(), addr(), addr()};
    layout::RivfEntry r{addr(), static_cast<std::uint32_t>(gen.u64()), static_cast<std::uint32_t>(gen.u64()),
                        static_cast<std::uint8_t>(gen.below(256)), 0};
    bad += !(layout::unpack_rdb(layout::pack_rdb(e)) == e);
    bad += !(layout::unpack_rivf(layout::pack_rivf(r)) == r);
  }
  // A deployed database of 4 KB binary embeddings (D = 32768).
  layout::SsdDevice dev(testing::toy_config(2, 1, 1, 64, 8));
  const auto vecs = gen.vectors(8, 32768);
  const auto& db = dev.deploy_flat(0, vecs, gen.documents(8, 10, 20), vdb::train_quantizer(vecs));
  const auto oob = layout::oob_link_table_bytes(db.binary.slots_per_page, db.stores_radr());
  ok = ok && bad == 0 && db.binary.slots_per_page == 4 && oob == 16;
  return {ok, "21/15-byte records, " + std::to_string(bad) + " round-trip failures in 2x10^4, " +
                  std::to_string(oob) + " B link table per 4 KB-embedding page"};
}

Outcome quickselect_suite() {
  testing::Gen gen(10);
  std::uint64_t failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = static_cast<std::size_t>(gen.range(100, 3000));
    const std::size_t ms[4] = {1, kK, 10 * kK, n};
    const bool coarse = trial % 2 == 0;
    std::vector<engine::TtlEntryC> c;
    std::vector<engine::TtlEntryE> f;
    for (std::size_t i = 0; i < n; ++i) {
      const auto dist = static_cast<std::uint16_t>(gen.below(40));  // heavy duplication
      if (coarse) {
        engine::TtlEntryC e;
        e.dist = dist;
        e.eadr = {gen.below(1u << 20), static_cast<std::uint32_t>(gen.below(128))};
        c.push_back(e);
      } else {
        engine::TtlEntryE e;
        e.dist = dist;
        e.radr = static_cast<std::uint32_t>(i);
        f.push_back(e);
      }
    }
    for (auto m : ms) {
      if (coarse) {
        auto sorted = c;
        std::stable_sort(sorted.begin(), sorted.end(), engine::ByDistEadr{});
        auto sel = c;
        engine::quickselect_smallest(sel, m, engine::ByDistEadr{});
        std::multiset<std::pair<std::uint16_t, std::uint64_t>> a, b;
        for (std::size_t i = 0; i < m; ++i) a.emplace(sorted[i].dist, sorted[i].eadr.packed());
        for (const auto& e : sel) b.emplace(e.dist, e.eadr.packed());
        failures += a != b;
      } else {
        auto sorted = f;
        std::stable_sort(sorted.begin(), sorted.end(), engine::ByDistRadr{});
        auto sel = f;
        engine::quickselect_smallest(sel, m, engine::ByDistRadr{});
        std::set<std::pair<std::uint16_t, std::uint32_t>> a, b;
        for (std::size_t i = 0; i < m; ++i) a.emplace(sorted[i].dist, sorted[i].radr);
        for (const auto& e : sel) b.emplace(e.dist, e.radr);
        failures += a != b;
      }
    }
  }
  return {failures == 0, "1000 inputs x 4 cut points, " + std::to_string(failures) + " failures"};
}

Outcome linkage(const layout::SsdDevice& dev, std::string& detail) {
  const auto& db = dev.database(0);
  std::vector<char> doc_seen(db.documents.size(), 0), radr_seen(db.size, 0);
  std::uint64_t dangling = 0, wrong = 0;
  std::vector<std::int8_t> expect(db.dim);
  for (std::uint64_t pos = 0; pos < db.size; ++pos) {
    const auto link = dev.link(db, pos);
    if (link.radr >= db.size) {
      ++dangling;
      continue;
    }
    radr_seen[link.radr] = 1;
    const auto ds = db.position_to_dataset[link.radr];
    vdb::quantize_int8_into(g.data.vectors.row(ds), db.quantizer, expect);
    const auto twin = dev.int8_embedding(db, link.radr);
    wrong += !std::equal(twin.begin(), twin.end(), expect.begin(), expect.end());
    try {
      const auto doc = dev.lookup_document(db, link.dadr);
      doc_seen[doc.chunk_index] = 1;
      wrong += doc.chunk != g.data.documents[ds];
    } catch (const Error&) {
      ++dangling;
    }
  }
  const auto docs = std::count(doc_seen.begin(), doc_seen.end(), 1);
  const auto twins = std::count(radr_seen.begin(), radr_seen.end(), 1);
  const bool ok = dangling == 0 && wrong == 0 && static_cast<std::size_t>(docs) == db.documents.size() &&
                  static_cast<std::uint64_t>(twins) == db.size;
  detail += std::string(db.mode == layout::DeployMode::kIvf ? "ivf" : "flat") + ": " + std::to_string(docs) +
            " documents, " + std::to_string(twins) + " INT8 twins, " + std::to_string(dangling) +
            " dangling, " + std::to_string(wrong) + " mismatched; ";
  return {ok, ""};
}

Outcome linkage_totality() {
  std::string detail;
  const bool a = linkage(*g.ssd1, detail).pass;
  const bool b = linkage(*g.ivf, detail).pass;
  return {a && b, detail};
}

}  // namespace

int main() {
  const char* names[12] = {"",
                           "distance-kernel exactness",
                           "flat oracle equivalence",
                           "IVF recall at desk scale",
                           "distance-filtering safety and efficacy",
                           "MPIBC exactness",
                           "optimization ordering",
                           "preset dominance",
                           "engine-vs-host speedup",
                           "bit-exact metadata",
                           "quickselect property suite",
                           "linkage totality"};
  const double budgets[12] = {0, 5, 120, 300, 180, 1, 300, 1, 120, 1, 30, 60};
  criterion(1, names[1], budgets[1], kernel_exactness);
  criterion(5, names[5], budgets[5], mpibc_ratio);
  criterion(9, names[9], budgets[9], metadata);
  criterion(10, names[10], budgets[10], quickselect_suite);
  criterion(2, names[2], budgets[2], flat_oracle_equivalence);
  criterion(4, names[4], budgets[4], filtering);
  criterion(6, names[6], budgets[6], optimization_ordering);
  criterion(7, names[7], budgets[7], preset_dominance);
  criterion(8, names[8], budgets[8], host_speedup);
  criterion(3, names[3], budgets[3], ivf_recall);
  criterion(11, names[11], budgets[11], linkage_totality);

  std::sort(g_lines.begin(), g_lines.end(), [](const Line& a, const Line& b) { return a.id < b.id; });
  int failed = 0;
  for (const auto& l : g_lines) {
    failed += !l.outcome.pass;
    std::printf("%s %2d %s [%.2f s / %.0f s] %s\n", l.outcome.pass ? "PASS" : "FAIL", l.id, l.name.c_str(),
                l.elapsed_s, l.budget_s, l.outcome.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(g_lines.size()) - failed, g_lines.size());
  return failed == 0 ? 0 : 1;
}
