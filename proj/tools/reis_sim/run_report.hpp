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
#include <stdexcept>
#include <string>
#include <vector>

namespace reis::report {

/// One benchmark configuration measured over a query batch.
struct RunRow {
  std::string preset;
  std::string mode;  // flat | ivf
  std::uint32_t nprobe = 0;
  std::optional<std::uint32_t> threshold;
  std::string opts;  // none | df | df+pl | df+pl+mpibc
  std::uint64_t queries = 0;
  double qps = 0;
  double mean_latency_us = 0;
  double p50_latency_us = 0;
  double p99_latency_us = 0;
  double energy_uj = 0;  // per query
  double recall = 0;     // Recall@k against FP32 ground truth
  double filtered_pct = 0;
  double pages_read = 0;  // per query
  std::optional<double> host_load_us;
  std::optional<double> host_scan_us;

  std::optional<double> host_latency_us() const {
    if (!host_load_us || !host_scan_us) return std::nullopt;
    return *host_load_us + *host_scan_us;
  }
  friend bool operator==(const RunRow&, const RunRow&) = default;
};

struct RunReport {
  std::string generated;  // free-form header (timestamp); excluded from equality of rows
  std::uint32_t k = 10;
  std::vector<RunRow> rows;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

/// Thrown for malformed report files.
struct ReportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// QPS of a batch: queries / total latency.
double qps(std::uint64_t queries, double total_latency_us);
/// Nearest-rank percentile, p in [0, 100].
double percentile(std::vector<double> values, double p);

/// CSV: first line "# <generated>", second line "# k=<k>", then a header row.
std::string to_csv(const RunReport& r);
RunReport from_csv(const std::string& text);
std::string to_json(const RunReport& r);
RunReport from_json(const std::string& text);
/// Dispatches on the first non-space character.
RunReport parse_report(const std::string& text);

/// Concatenates rows in input order.
RunReport merge(const std::vector<RunReport>& runs);

/// Rows sharing (mode, nprobe, threshold, opts), one cell per preset.
struct ComparisonCell {
  double qps = 0;
  double mean_latency_us = 0;
  std::optional<double> speedup_vs_host;
};
struct ComparisonRow {
  std::string mode;
  std::uint32_t nprobe = 0;
  std::optional<std::uint32_t> threshold;
  std::string opts;
  std::vector<std::optional<ComparisonCell>> cells;  // parallel to presets
};
struct Comparison {
  std::vector<std::string> presets;  // order of first appearance
  std::vector<ComparisonRow> rows;
};

Comparison compare(const RunReport& merged);
/// Key columns, qps_<preset> and speedup_vs_host_<preset> per preset, and
/// qps_ratio_<p>_over_<first> for every later preset.
std::string comparison_csv(const Comparison& c);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace reis::report
