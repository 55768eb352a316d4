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


#include "run_report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace reis::report {

namespace {

const std::vector<std::string>& columns() {
  static const std::vector<std::string> c = {
      "preset",        "mode",           "nprobe",         "threshold",      "opts",
      "queries",       "qps",            "mean_latency_us", "p50_latency_us", "p99_latency_us",
      "energy_uj",     "recall",         "filtered_pct",    "pages_read",     "host_load_us",
      "host_scan_us",  "host_latency_us"};
  return c;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  double v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw ReportError("bad number '" + s + "' in column " + what);
  }
  return v;
}

std::uint64_t parse_uint(const std::string& s, const std::string& what) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
    throw ReportError("bad integer '" + s + "' in column " + what);
  }
  return v;
}

std::string opt_text(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

nlohmann::ordered_json opt_json(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

std::optional<double> opt_from(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, p);
}

double qps(std::uint64_t queries, double total_latency_us) {
  return total_latency_us > 0 ? static_cast<double>(queries) * 1e6 / total_latency_us : 0.0;
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double rank = std::ceil(std::clamp(p, 0.0, 100.0) / 100.0 * values.size());
  const std::size_t idx = rank < 1 ? 0 : static_cast<std::size_t>(rank) - 1;
  return values[std::min(idx, values.size() - 1)];
}

std::string to_csv(const RunReport& r) {
  std::ostringstream out;
  out << "# " << r.generated << "\n# k=" << r.k << "\n";
  for (std::size_t i = 0; i < columns().size(); ++i) out << (i ? "," : "") << columns()[i];
  out << "\n";
  for (const auto& row : r.rows) {
    out << row.preset << ',' << row.mode << ',' << row.nprobe << ','
        << (row.threshold ? std::to_string(*row.threshold) : "") << ',' << row.opts << ','
        << row.queries << ',' << format_double(row.qps) << ','
        << format_double(row.mean_latency_us) << ',' << format_double(row.p50_latency_us) << ','
        << format_double(row.p99_latency_us) << ',' << format_double(row.energy_uj) << ','
        << format_double(row.recall) << ',' << format_double(row.filtered_pct) << ','
        << format_double(row.pages_read) << ',' << opt_text(row.host_load_us) << ','
        << opt_text(row.host_scan_us) << ',' << opt_text(row.host_latency_us()) << "\n";
  }
  return out.str();
}

RunReport from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  RunReport r;
  bool header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("# k=", 0) == 0) {
      r.k = static_cast<std::uint32_t>(parse_uint(line.substr(4), "k"));
      continue;
    }
    if (line.rfind("# ", 0) == 0) {
      r.generated = line.substr(2);
      continue;
    }
    const auto f = split(line, ',');
    if (!header) {
      if (f != columns()) throw ReportError("unexpected CSV header: " + line);
      header = true;
      continue;
    }
    if (f.size() != columns().size()) {
      throw ReportError("CSV row has " + std::to_string(f.size()) + " fields: " + line);
    }
    RunRow row;
    row.preset = f[0];
    row.mode = f[1];
    row.nprobe = static_cast<std::uint32_t>(parse_uint(f[2], "nprobe"));
    if (!f[3].empty()) row.threshold = static_cast<std::uint32_t>(parse_uint(f[3], "threshold"));
    row.opts = f[4];
    row.queries = parse_uint(f[5], "queries");
    row.qps = parse_double(f[6], "qps");
    row.mean_latency_us = parse_double(f[7], "mean_latency_us");
    row.p50_latency_us = parse_double(f[8], "p50_latency_us");
    row.p99_latency_us = parse_double(f[9], "p99_latency_us");
    row.energy_uj = parse_double(f[10], "energy_uj");
    row.recall = parse_double(f[11], "recall");
    row.filtered_pct = parse_double(f[12], "filtered_pct");
    row.pages_read = parse_double(f[13], "pages_read");
    if (!f[14].empty()) row.host_load_us = parse_double(f[14], "host_load_us");
    if (!f[15].empty()) row.host_scan_us = parse_double(f[15], "host_scan_us");
    r.rows.push_back(std::move(row));
  }
  if (!header) throw ReportError("CSV report has no header row");
  return r;
}

std::string to_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["generated"] = r.generated;
  j["k"] = r.k;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json o;
    o["preset"] = row.preset;
    o["mode"] = row.mode;
    o["nprobe"] = row.nprobe;
    o["threshold"] = row.threshold ? nlohmann::ordered_json(*row.threshold)
                                   : nlohmann::ordered_json(nullptr);
    o["opts"] = row.opts;
    o["queries"] = row.queries;
    o["qps"] = row.qps;
    o["mean_latency_us"] = row.mean_latency_us;
    o["p50_latency_us"] = row.p50_latency_us;
    o["p99_latency_us"] = row.p99_latency_us;
    o["energy_uj"] = row.energy_uj;
    o["recall"] = row.recall;
    o["filtered_pct"] = row.filtered_pct;
    o["pages_read"] = row.pages_read;
    o["host_load_us"] = opt_json(row.host_load_us);
    o["host_scan_us"] = opt_json(row.host_scan_us);
    o["host_latency_us"] = opt_json(row.host_latency_us());
    j["rows"].push_back(o);
  }
  return j.dump(2) + "\n";
}

RunReport from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    RunReport r;
    r.generated = j.value("generated", "");
    r.k = j.value("k", 10u);
    for (const auto& o : j.at("rows")) {
      RunRow row;
      row.preset = o.at("preset").get<std::string>();
      row.mode = o.at("mode").get<std::string>();
      row.nprobe = o.at("nprobe").get<std::uint32_t>();
      if (!o.at("threshold").is_null()) row.threshold = o["threshold"].get<std::uint32_t>();
      row.opts = o.at("opts").get<std::string>();
      row.queries = o.at("queries").get<std::uint64_t>();
      row.qps = o.at("qps").get<double>();
      row.mean_latency_us = o.at("mean_latency_us").get<double>();
      row.p50_latency_us = o.at("p50_latency_us").get<double>();
      row.p99_latency_us = o.at("p99_latency_us").get<double>();
      row.energy_uj = o.at("energy_uj").get<double>();
      row.recall = o.at("recall").get<double>();
      row.filtered_pct = o.at("filtered_pct").get<double>();
      row.pages_read = o.at("pages_read").get<double>();
      row.host_load_us = opt_from(o, "host_load_us");
      row.host_scan_us = opt_from(o, "host_scan_us");
      r.rows.push_back(std::move(row));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ReportError(std::string("JSON report: ") + e.what());
  }
}

RunReport parse_report(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw ReportError("empty report");
  return text[first] == '{' ? from_json(text) : from_csv(text);
}

RunReport merge(const std::vector<RunReport>& runs) {
  RunReport out;
  if (runs.empty()) return out;
  out.generated = runs.front().generated;
  out.k = runs.front().k;
  for (const auto& r : runs) {
    if (r.k != out.k) throw ReportError("cannot merge runs with different k");
    out.rows.insert(out.rows.end(), r.rows.begin(), r.rows.end());
  }
  return out;
}

Comparison compare(const RunReport& merged) {
  Comparison c;
  using Key = std::tuple<std::string, std::uint32_t, std::optional<std::uint32_t>, std::string>;
  std::map<Key, std::size_t> row_of;
  for (const auto& r : merged.rows) {
    if (std::find(c.presets.begin(), c.presets.end(), r.preset) == c.presets.end()) {
      c.presets.push_back(r.preset);
    }
  }
  for (const auto& r : merged.rows) {
    const Key key{r.mode, r.nprobe, r.threshold, r.opts};
    auto it = row_of.find(key);
    if (it == row_of.end()) {
      it = row_of.emplace(key, c.rows.size()).first;
      ComparisonRow row;
      row.mode = r.mode;
      row.nprobe = r.nprobe;
      row.threshold = r.threshold;
      row.opts = r.opts;
      row.cells.resize(c.presets.size());
      c.rows.push_back(std::move(row));
    }
    const auto p = static_cast<std::size_t>(
        std::find(c.presets.begin(), c.presets.end(), r.preset) - c.presets.begin());
    ComparisonCell cell;
    cell.qps = r.qps;
    cell.mean_latency_us = r.mean_latency_us;
    if (const auto h = r.host_latency_us(); h && r.mean_latency_us > 0) {
      cell.speedup_vs_host = *h / r.mean_latency_us;
    }
    c.rows[it->second].cells[p] = cell;
  }
  return c;
}

std::string comparison_csv(const Comparison& c) {
  std::ostringstream out;
  out << "mode,nprobe,threshold,opts";
  for (const auto& p : c.presets) out << ",qps_" << p << ",speedup_vs_host_" << p;
  for (std::size_t i = 1; i < c.presets.size(); ++i) {
    out << ",qps_ratio_" << c.presets[i] << "_over_" << c.presets[0];
  }
  out << "\n";
  for (const auto& row : c.rows) {
    out << row.mode << ',' << row.nprobe << ','
        << (row.threshold ? std::to_string(*row.threshold) : "") << ',' << row.opts;
    for (const auto& cell : row.cells) {
      out << ',' << (cell ? format_double(cell->qps) : "") << ','
          << (cell && cell->speedup_vs_host ? format_double(*cell->speedup_vs_host) : "");
    }
    for (std::size_t i = 1; i < c.presets.size(); ++i) {
      const auto& a = row.cells[0];
      const auto& b = row.cells[i];
      out << ',' << (a && b && a->qps > 0 ? format_double(b->qps / a->qps) : "");
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace reis::report
