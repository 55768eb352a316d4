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


#include <algorithm>

#include "doctest.h"
#include "engine/engine.hpp"
#include "host/baseline.hpp"
#include "ivf/ivf_index.hpp"
#include "support/oracles.hpp"
#include "vectordb/quantizer.hpp"

using namespace reis;
using namespace reis::host;
using reis::testing::Gen;

TEST_CASE("exact ground truth agrees with a long-double scan") {
  Gen g(1);
  const auto base = g.blobs(1000, 48, 5, 1.0f);
  const auto queries = g.vectors(200, 48);
  const auto gt = exact_ground_truth(queries, base, 10);
  REQUIRE(gt.size() == 200);
  for (std::size_t q = 0; q < queries.size(); ++q) {
    std::vector<std::pair<long double, std::uint32_t>> all;
    for (std::uint32_t i = 0; i < 1000; ++i) all.emplace_back(testing::precise_l2(queries.row(q), base.row(i)), i);
    std::sort(all.begin(), all.end());
    // Compare as distance sets so float rounding cannot flip near-ties.
    for (std::size_t r = 0; r < 10; ++r) {
      const auto got = testing::precise_l2(queries.row(q), base.row(gt[q][r]));
      CHECK(static_cast<double>(got) == doctest::Approx(static_cast<double>(all[r].first)).epsilon(1e-5));
    }
  }
}

TEST_CASE("ground truth ties go to the lower index") {
  vdb::VectorSet base(1, {1.0f, -1.0f, 1.0f, 5.0f});
  vdb::VectorSet q(1, {0.0f});
  const auto gt = exact_ground_truth(q, base, 3);
  CHECK(gt[0] == std::vector<std::uint32_t>{0, 1, 2});
}

TEST_CASE("recall at k") {
  const std::vector<std::uint32_t> truth{1, 2, 3, 4};
  CHECK(recall_at_k(std::vector<std::uint32_t>{4, 3, 2, 1}, truth, 4) == 1.0);
  CHECK(recall_at_k(std::vector<std::uint32_t>{5, 6, 7, 8}, truth, 4) == 0.0);
  CHECK(recall_at_k(std::vector<std::uint32_t>{1, 9, 2, 8}, truth, 4) == 0.5);
  CHECK(recall_at_k(std::vector<std::uint32_t>{1, 2}, truth, 2) == 1.0);
  CHECK(mean_recall_at_k({{1}, {9}}, {{1}, {2}}, 1) == 0.5);
}

TEST_CASE("ground truth file round-trip") {
  Gen g(2);
  GroundTruth gt(17, std::vector<std::uint32_t>(5));
  for (auto& row : gt) for (auto& v : row) v = static_cast<std::uint32_t>(g.u64());
  std::uint32_t k = 0;
  CHECK(deserialize_ground_truth(serialize_ground_truth(gt, 5), &k) == gt);
  CHECK(k == 5);
  auto bytes = serialize_ground_truth(gt, 5);
  bytes.pop_back();
  CHECK_THROWS_AS(deserialize_ground_truth(bytes), Error);
}

TEST_CASE("loading time at the modeled bandwidth") {
  HostCostModel m;
  CHECK(load_seconds(14'000'000'000ull, m) == doctest::Approx(2.0588).epsilon(1e-3));
  CHECK(load_seconds(0, m) == 0.0);
}

TEST_CASE("host retrieval matches the in-storage engine") {
  Gen g(3);
  for (bool ivf_mode : {false, true}) {
    const auto v = g.blobs(900, 64, 6, 0.8f);
    const auto q = vdb::train_quantizer(v);
    layout::SsdDevice dev(testing::toy_config(2, 2, 2, 64, 8));
    if (ivf_mode) {
      dev.deploy_ivf(0, v, g.documents(900, 5, 50), ivf::build_index(v, {.nlist = 12, .seed = 1}), q);
    } else {
      dev.deploy_flat(0, v, g.documents(900, 5, 50), q);
    }
    const auto& db = dev.database(0);
    const auto queries = g.vectors(15, 64);
    HostCostModel model;
    model.hamming_vectors_per_us = 1000;
    model.int8_vectors_per_us = 100;
    model.fp32_vectors_per_us = 10;
    HostParams hp;
    hp.k = 7;
    hp.nprobe = 4;
    hp.candidate_multiplier = 3;
    const auto host = host_search(dev, db, queries, hp, model);
    engine::Engine e(dev);
    engine::SearchParams sp;
    sp.k = 7;
    sp.nprobe = 4;
    sp.candidate_multiplier = 3;
    for (std::size_t i = 0; i < queries.size(); ++i) {
      const auto r = e.search(queries.row(i), 0, sp);
      std::vector<std::uint32_t> ids;
      for (const auto& it : r.topk) ids.push_back(it.dataset_index);
      CHECK(ids == host.indices[i]);
    }
    CHECK(host.load_s == doctest::Approx(load_seconds(db.image_bytes(dev.geometry()), model)));
    CHECK(host.latency_per_query_s() > host.load_s);
    const auto none = host_search(dev, db, vdb::VectorSet(64), hp, model);
    CHECK(none.latency_per_query_s() == 0.0);
  }
}

TEST_CASE("end-to-end breakdown") {
  HostCostModel m;
  const auto rows = end_to_end_breakdown(m, 0.0, 0.001);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].stage == "Embedding Model Loading");
  CHECK(rows[5].stage == "Generation");
  double pct = 0;
  for (const auto& r : rows) pct += r.percent;
  CHECK(pct == doctest::Approx(100.0));
  CHECK(rows[5].percent == doctest::Approx(92.0).epsilon(0.01));
  const auto host = end_to_end_breakdown(m, 2.06, 0.5);
  CHECK(host[2].seconds == 2.06);
  CHECK(host[5].percent < rows[5].percent);
  CHECK_THROWS_AS(end_to_end_breakdown(m, -1.0, 0.0), Error);
}

TEST_CASE("calibration fills only missing rates") {
  HostCostModel m;
  m.int8_vectors_per_us = 123.0;
  const auto c = calibrate(m, 64, 1);
  CHECK(c.calibrated());
  CHECK(c.int8_vectors_per_us == 123.0);
  CHECK(c.hamming_vectors_per_us > 0);
}

TEST_CASE("a stored vector is its own nearest neighbour; k = n ranks everything") {
  Gen g(4);
  const auto base = g.vectors(120, 24);
  vdb::VectorSet q(24);
  for (std::size_t i : {0u, 57u, 119u}) q.push_back(base.row(i));
  const auto gt = exact_ground_truth(q, base, 120);
  CHECK(gt[0][0] == 0);
  CHECK(gt[1][0] == 57);
  CHECK(gt[2][0] == 119);
  for (const auto& row : gt) {
    auto sorted = row;
    std::sort(sorted.begin(), sorted.end());
    for (std::uint32_t i = 0; i < 120; ++i) REQUIRE(sorted[i] == i);
  }
}

TEST_CASE("recall ignores result order") {
  Gen g(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::uint32_t> truth(10), result(10);
    for (auto& t : truth) t = static_cast<std::uint32_t>(g.below(30));
    for (auto& r : result) r = static_cast<std::uint32_t>(g.below(30));
    const double base = recall_at_k(result, truth, 10);
    std::shuffle(result.begin(), result.end(), g.engine());
    CHECK(recall_at_k(result, truth, 10) == base);
  }
}

TEST_CASE("zero retrieval time still sums to a full breakdown") {
  const auto rows = end_to_end_breakdown(HostCostModel{}, 0.0, 0.0);
  double pct = 0;
  for (const auto& r : rows) pct += r.percent;
  CHECK(pct == doctest::Approx(100.0));
  CHECK(rows[3].seconds == 0.0);
}

TEST_CASE("loading alone outweighs the engine once the image is large") {
  Gen g(6);
  const auto v = g.vectors(4000, 256);
  const auto q = vdb::train_quantizer(v);
  layout::SsdDevice dev(testing::toy_config(2, 2, 2, 64, 16));
  dev.deploy_flat(0, v, g.documents(4000, 4097, 4200), q);
  const auto& db = dev.database(0);
  HostCostModel model;
  model.hamming_vectors_per_us = model.int8_vectors_per_us = model.fp32_vectors_per_us = 1e6;
  const auto queries = g.vectors(3, 256);
  const auto host = host_search(dev, db, queries, {}, model);
  engine::Engine e(dev);
  engine::SearchParams sp;
  sp.enable_pl = sp.enable_mpibc = true;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const double engine_s = e.search(queries.row(i), 0, sp).metrics.latency_us() / 1e6;
    REQUIRE(host.load_s > engine_s);
    CHECK(host.latency_per_query_s() / engine_s > 1.0);
  }
  CHECK(host.load_s > 0.0);
}
