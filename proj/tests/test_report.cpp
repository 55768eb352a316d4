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


#include <cmath>
#include <random>

#include "doctest.h"
#include "reis_sim/run_report.hpp"

using namespace reis::report;

namespace {

double any_double(std::mt19937_64& rng) {
  switch (rng() % 4) {
    case 0: return 0.0;
    case 1: return static_cast<double>(rng() % 100000);
    case 2: return std::ldexp(static_cast<double>(rng() % (1ull << 52)), -static_cast<int>(rng() % 60));
    default: return 1.0 / static_cast<double>(1 + rng() % 1000);
  }
}

RunReport random_report(std::mt19937_64& rng) {
  static const char* presets[] = {"reis-ssd1", "reis-ssd2"};
  static const char* opts[] = {"none", "df", "df+pl", "df+pl+mpibc"};
  RunReport r;
  r.generated = "run " + std::to_string(rng() % 1000);
  r.k = static_cast<std::uint32_t>(1 + rng() % 50);
  const auto n = rng() % 12;
  for (std::uint64_t i = 0; i < n; ++i) {
    RunRow row;
    row.preset = presets[rng() % 2];
    row.mode = rng() % 2 ? "ivf" : "flat";
    row.nprobe = static_cast<std::uint32_t>(rng() % 64);
    if (rng() % 2) row.threshold = static_cast<std::uint32_t>(rng() % 1024);
    row.opts = opts[rng() % 4];
    row.queries = rng() % 10000;
    row.qps = any_double(rng);
    row.mean_latency_us = any_double(rng);
    row.p50_latency_us = any_double(rng);
    row.p99_latency_us = any_double(rng);
    row.energy_uj = any_double(rng);
    row.recall = any_double(rng);
    row.filtered_pct = any_double(rng);
    row.pages_read = any_double(rng);
    if (rng() % 2) {
      row.host_load_us = any_double(rng);
      row.host_scan_us = any_double(rng);
    }
    r.rows.push_back(row);
  }
  return r;
}

RunRow row(const std::string& preset, const std::string& opts, double qps, double lat,
           std::optional<double> host = std::nullopt) {
  RunRow r;
  r.preset = preset;
  r.mode = "flat";
  r.opts = opts;
  r.queries = 10;
  r.qps = qps;
  r.mean_latency_us = lat;
  if (host) {
    r.host_load_us = *host;
    r.host_scan_us = 0.0;
  }
  return r;
}

}  // namespace

TEST_CASE("qps and nearest-rank percentiles") {
  CHECK(qps(100, 1e6) == 100.0);
  CHECK(qps(0, 0) == 0.0);
  CHECK(percentile({5, 1, 3, 2, 4}, 50) == 3);
  CHECK(percentile({5, 1, 3, 2, 4}, 99) == 5);
  CHECK(percentile({5, 1, 3, 2, 4}, 0) == 1);
  CHECK(percentile({}, 50) == 0);
}

TEST_CASE("format_double round-trips") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double v = any_double(rng) * (rng() % 2 ? 1 : -1);
    REQUIRE(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("CSV and JSON round-trip random reports") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 300; ++i) {
    const auto r = random_report(rng);
    REQUIRE(from_csv(to_csv(r)) == r);
    REQUIRE(from_json(to_json(r)) == r);
    REQUIRE(parse_report(to_csv(r)) == r);
    REQUIRE(parse_report("  \n" + to_json(r)) == r);
  }
}

TEST_CASE("malformed reports are rejected") {
  CHECK_THROWS_AS(from_csv(""), ReportError);
  CHECK_THROWS_AS(from_csv("# x\n# k=10\npreset,mode\n"), ReportError);
  RunReport r;
  r.rows.push_back(row("reis-ssd1", "none", 1, 2));
  auto text = to_csv(r);
  text += "reis-ssd1,flat\n";
  CHECK_THROWS_AS(from_csv(text), ReportError);
  CHECK_THROWS_AS(from_json("{\"rows\": 3}"), ReportError);
  CHECK_THROWS_AS(from_json("{not json"), ReportError);
}

TEST_CASE("merge keeps input order") {
  RunReport a, b;
  a.rows = {row("reis-ssd1", "none", 1, 1)};
  b.rows = {row("reis-ssd2", "none", 2, 1), row("reis-ssd2", "df", 3, 1)};
  const auto m = merge({a, b});
  REQUIRE(m.rows.size() == 3);
  CHECK(m.rows[0].preset == "reis-ssd1");
  CHECK(m.rows[2].opts == "df");
}

TEST_CASE("comparison joins presets on the run key") {
  RunReport r;
  r.rows = {row("reis-ssd1", "none", 100, 10, 1000.0), row("reis-ssd2", "none", 250, 4),
            row("reis-ssd1", "df", 400, 2)};
  const auto c = compare(r);
  CHECK(c.presets == std::vector<std::string>{"reis-ssd1", "reis-ssd2"});
  REQUIRE(c.rows.size() == 2);
  const auto& none = c.rows[0];
  REQUIRE(none.cells[0].has_value());
  REQUIRE(none.cells[1].has_value());
  CHECK(none.cells[0]->qps == 100);
  CHECK(none.cells[0]->speedup_vs_host == doctest::Approx(100.0));
  CHECK_FALSE(none.cells[1]->speedup_vs_host.has_value());
  CHECK_FALSE(c.rows[1].cells[1].has_value());
  const auto csv = comparison_csv(c);
  CHECK(csv.find("qps_ratio_reis-ssd2_over_reis-ssd1") != std::string::npos);
  CHECK(csv.find("2.5") != std::string::npos);
}
