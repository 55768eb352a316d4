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


// reis_sim: dataset generation, deployment, search and benchmarking on the
// modeled SSD. Talks to the simulator only through the C API.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "reis/reis.h"
#include "run_report.hpp"

namespace fs = std::filesystem;
namespace report = reis::report;
using nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void usage_error(const std::string& msg) { throw CliError{kExitUsage, msg}; }
[[noreturn]] void data_error(const std::string& msg) { throw CliError{kExitData, msg}; }

void check(reis_status s) {
  if (s == REIS_OK) return;
  const std::string msg = reis_last_error();
  throw CliError{s == REIS_E_INVALID_ARGUMENT ? kExitUsage : kExitData,
                 std::string(reis_status_name(s)) + ": " + msg};
}

struct DatasetDeleter {
  void operator()(reis_dataset* d) const { reis_dataset_free(d); }
};
struct DeviceDeleter {
  void operator()(reis_device* d) const { reis_device_free(d); }
};
using Dataset = std::unique_ptr<reis_dataset, DatasetDeleter>;
using Device = std::unique_ptr<reis_device, DeviceDeleter>;

template <class F>
std::string read_string(F&& call) {
  std::size_t needed = 0;
  const reis_status s = call(nullptr, 0, &needed);
  if (s != REIS_OK && s != REIS_E_BUFFER_TOO_SMALL) check(s);
  std::string out(needed + 1, '\0');
  check(call(out.data(), out.size(), &needed));
  out.resize(needed);
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) data_error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const std::string& path, const std::string& text) {
  const auto parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) data_error("cannot create " + path);
  out << text;
  if (!out) data_error("write failed: " + path);
}

std::string hex(const std::uint8_t* p, std::size_t n) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    s += kDigits[p[i] >> 4];
    s += kDigits[p[i] & 15];
  }
  return s;
}

std::string timestamp() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return std::string("generated ") + buf;
}

// ------------------------------------------------------------------ globals

struct Globals {
  std::string config_path;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string config_text;

  void load() {
    if (const char* env = std::getenv("REIS_SIM_CONFIG"); env != nullptr && *env != '\0') {
      config_path = env;
    }
    if (!config_path.empty()) config_text = read_text(config_path);
  }

  std::optional<std::string> config(const char* key) const {
    if (config_text.empty()) return std::nullopt;
    std::size_t needed = 0;
    const reis_status s = reis_config_get(config_text.c_str(), key, nullptr, 0, &needed);
    if (s == REIS_E_NOT_FOUND) return std::nullopt;
    return read_string([&](char* b, std::size_t c, std::size_t* n) {
      return reis_config_get(config_text.c_str(), key, b, c, n);
    });
  }

  std::uint64_t effective_seed() const {
    if (seed) return *seed;
    if (const auto v = config("seed")) {
      try {
        std::size_t used = 0;
        const auto s = std::stoull(*v, &used);
        if (used == v->size()) return s;
      } catch (const std::exception&) {
      }
      usage_error("config: bad seed '" + *v + "'");
    }
    return 0;
  }

  Device make_device(const std::string& preset_override = "") const {
    reis_device* d = nullptr;
    const std::string& p = preset_override.empty() ? preset : preset_override;
    check(reis_device_create(p.empty() ? nullptr : p.c_str(),
                             config_text.empty() ? nullptr : config_text.c_str(), &d));
    return Device(d);
  }

  std::string require_out(const char* what) const {
    if (out.empty()) usage_error(std::string(what) + " needs --out");
    return out;
  }
};

std::uint32_t page_size_of(const reis_device* dev) {
  reis_geometry g{};
  check(reis_device_geometry(dev, &g));
  return g.page_size;
}

std::string manifest_path(const std::string& p) {
  return fs::is_directory(p) ? (fs::path(p) / "manifest.json").string() : p;
}

Dataset open_dataset(const std::string& path, std::uint32_t max_doc_bytes) {
  if (path.empty()) usage_error("--dataset is required");
  reis_dataset* d = nullptr;
  check(reis_dataset_open(manifest_path(path).c_str(), max_doc_bytes, &d));
  return Dataset(d);
}

Device open_image(const std::string& dir) {
  reis_device* d = nullptr;
  check(reis_device_open(dir.c_str(), &d));
  return Device(d);
}

// ------------------------------------------------------------- search opts

struct SearchOptions {
  unsigned db_id = 0;
  std::uint32_t k = 10;
  std::uint32_t nprobe = 1;
  std::uint32_t candidate_multiplier = 10;
  std::optional<std::uint32_t> threshold;
  double keep_fraction = 0.01;
  std::optional<std::uint32_t> guard_rank;
  std::string opts = "none";
  std::string queries_path;
  std::uint64_t limit = 0;

  void add_to(CLI::App* cmd, bool with_opts) {
    cmd->add_option("--db-id", db_id, "Database id")->check(CLI::Range(0, 255));
    cmd->add_option("--k", k, "Results per query");
    cmd->add_option("--candidate-multiplier", candidate_multiplier, "Rerank candidates per result");
    cmd->add_option("--threshold", threshold, "Hamming filter threshold (default: calibrated)");
    cmd->add_option("--keep-fraction", keep_fraction,
                    "Fraction of entries kept by the calibrated threshold");
    cmd->add_option("--guard-rank", guard_rank,
                    "Calibrated threshold covers this many nearest entries per query "
                    "(default k * candidate multiplier)");
    cmd->add_option("--queries", queries_path, "RVEC file replacing the dataset queries");
    cmd->add_option("--limit", limit, "Use only the first N queries");
    if (with_opts) {
      cmd->add_option("--nprobe", nprobe, "Clusters probed (IVF)");
      cmd->add_option("--opts", opts, "none | df | df+pl | df+pl+mpibc (any combination)");
    }
  }
};

struct OptFlags {
  bool df = false;
  bool pl = false;
  bool mpibc = false;
};

OptFlags parse_opts(const std::string& s) {
  OptFlags f;
  if (s == "none" || s.empty()) return f;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, '+')) {
    if (part == "df") f.df = true;
    else if (part == "pl") f.pl = true;
    else if (part == "mpibc") f.mpibc = true;
    else usage_error("unknown optimization '" + part + "' in '" + s + "'");
  }
  return f;
}

std::uint32_t resolve_threshold(const reis_device* dev, const reis_dataset* ds,
                                const SearchOptions& o) {
  if (o.threshold) return *o.threshold;
  std::uint32_t t = 0;
  check(reis_calibrate_threshold(dev, o.db_id, ds, o.keep_fraction,
                                 o.guard_rank.value_or(o.k * o.candidate_multiplier), &t));
  return t;
}

reis_search_params make_params(const SearchOptions& o, std::uint32_t nprobe, const OptFlags& f,
                               std::uint32_t threshold) {
  reis_search_params p;
  reis_search_params_default(&p);
  p.k = o.k;
  p.nprobe = nprobe;
  p.candidate_multiplier = o.candidate_multiplier;
  p.enable_df = f.df;
  p.enable_pl = f.pl;
  p.enable_mpibc = f.mpibc;
  if (f.df) {
    p.has_filter_threshold = 1;
    p.filter_threshold = threshold;
  }
  return p;
}

std::uint64_t query_count(const reis_dataset* ds, const SearchOptions& o) {
  const std::uint64_t n = reis_dataset_query_count(ds);
  if (n == 0) data_error("dataset has no queries");
  return o.limit > 0 ? std::min(n, o.limit) : n;
}

ordered_json metrics_json(const reis_metrics& m) {
  return {{"latency_us", m.total_ns / 1000.0},
          {"ibc_us", m.ibc_ns / 1000.0},
          {"scan_us", m.scan_ns / 1000.0},
          {"transfer_us", m.transfer_ns / 1000.0},
          {"select_us", m.select_ns / 1000.0},
          {"rerank_us", m.rerank_ns / 1000.0},
          {"doc_fetch_us", m.doc_fetch_ns / 1000.0},
          {"energy_uj", m.energy_uj},
          {"entries_scanned", m.entries_scanned},
          {"entries_transferred", m.entries_transferred},
          {"entries_filtered", m.entries_filtered},
          {"pages_read", m.pages_read},
          {"channel_bytes", m.channel_bytes},
          {"iterations", m.iterations}};
}

const std::uint32_t* truth_rows(reis_dataset* ds, std::uint32_t k, bool compute,
                                std::uint32_t* truth_k) {
  const std::uint32_t* rows = nullptr;
  if (reis_dataset_truth(ds, truth_k, &rows) == REIS_OK && *truth_k >= k) return rows;
  if (!compute) return nullptr;
  check(reis_dataset_ground_truth(ds, k));
  check(reis_dataset_truth(ds, truth_k, &rows));
  return rows;
}

struct TraceWriter {
  std::ostream* out = nullptr;
  static void callback(const reis_trace_event* e, void* user) {
    auto* self = static_cast<TraceWriter*>(user);
    char buf[512];
    std::size_t needed = 0;
    if (reis_trace_event_json(e, buf, sizeof(buf), &needed) == REIS_OK) *self->out << buf << '\n';
  }
};

// ---------------------------------------------------------------- commands

int cmd_generate(const Globals& g, reis_generator_params p, const std::string& name,
                 std::uint32_t gt_k) {
  const std::string out = g.require_out("generate");
  p.seed = g.effective_seed();
  const auto dev = g.make_device();
  if (p.doc_max_bytes > page_size_of(dev.get())) {
    usage_error("--doc-max " + std::to_string(p.doc_max_bytes) + " exceeds the page size " +
                std::to_string(page_size_of(dev.get())));
  }
  reis_dataset* raw = nullptr;
  check(reis_dataset_generate(&p, name.c_str(), &raw));
  Dataset ds(raw);
  if (gt_k > 0 && p.queries > 0) check(reis_dataset_ground_truth(ds.get(), gt_k));
  check(reis_dataset_save(ds.get(), out.c_str()));
  std::cout << (fs::path(out) / "manifest.json").string() << "\n";
  return 0;
}

int cmd_ingest(const Globals& g, const std::string& name, const std::string& vectors,
               const std::string& documents, const std::string& queries) {
  const std::string out = g.require_out("ingest");
  const auto dev = g.make_device();
  const std::string manifest = (fs::path(out) / "manifest.json").string();
  check(reis_dataset_ingest(name.c_str(), vectors.c_str(), documents.c_str(),
                            queries.empty() ? nullptr : queries.c_str(), manifest.c_str(),
                            page_size_of(dev.get())));
  std::cout << manifest << "\n";
  return 0;
}

void print_database(const reis_device* dev, std::uint8_t db_id, std::ostream& os) {
  reis_db_info info{};
  check(reis_db_info_get(dev, db_id, &info));
  os << "preset       " << reis_device_preset(dev) << "\n";
  os << "database     " << int{info.db_id} << " (" << (info.mode == REIS_MODE_IVF ? "ivf" : "flat")
     << ", " << info.size << " x " << info.dim << ")\n";
  os << "documents    " << info.documents << "\n";
  os << "pages        " << info.occupied_pages << "\n";
  os << "image_bytes  " << info.image_bytes << "\n";
  std::uint8_t rdb[21];
  check(reis_rdb_entry(dev, db_id, rdb));
  os << "rdb          " << hex(rdb, sizeof(rdb)) << "\n";
  os << "nlist        " << info.nlist << "\n";
  for (std::uint32_t c = 0; c < info.nlist; ++c) {
    std::uint8_t e[15];
    check(reis_rivf_entry(dev, db_id, c, e));
    os << "rivf " << c << "\t" << hex(e, sizeof(e)) << "\n";
  }
}

int cmd_deploy(const Globals& g, const std::string& dataset, const std::string& mode,
               std::uint32_t nlist, std::uint32_t iters, std::uint32_t train_per_cluster,
               std::uint8_t db_id) {
  const std::string out = g.require_out("deploy");
  if (mode != "flat" && mode != "ivf") usage_error("--mode must be flat or ivf");
  auto dev = g.make_device();
  const auto ds = open_dataset(dataset, page_size_of(dev.get()));
  reis_deploy_params p;
  reis_deploy_params_default(&p);
  p.db_id = db_id;
  p.mode = mode == "ivf" ? REIS_MODE_IVF : REIS_MODE_FLAT;
  p.nlist = nlist;
  p.kmeans_iters = iters;
  p.training_points_per_cluster = train_per_cluster;
  p.seed = g.effective_seed();
  check(reis_deploy(dev.get(), ds.get(), &p));
  check(reis_device_save(dev.get(), out.c_str()));
  std::cout << "image        " << out << "\n";
  print_database(dev.get(), db_id, std::cout);
  return 0;
}

int cmd_search(const Globals& g, const std::string& image, const std::string& dataset,
               SearchOptions o, const std::string& engine, const std::string& trace_path,
               bool want_recall) {
  if (image.empty()) usage_error("--image is required");
  if (engine != "reis" && engine != "host") usage_error("--engine must be reis or host");
  auto dev = open_image(image);
  auto ds = open_dataset(dataset, 0);
  if (!o.queries_path.empty()) check(reis_dataset_load_queries(ds.get(), o.queries_path.c_str()));
  const std::uint64_t nq = query_count(ds.get(), o);
  const std::uint32_t dim = reis_dataset_dim(ds.get());
  const OptFlags flags = parse_opts(o.opts);

  ordered_json j;
  j["engine"] = engine;
  j["preset"] = reis_device_preset(dev.get());
  j["db_id"] = o.db_id;
  j["k"] = o.k;
  j["nprobe"] = o.nprobe;
  j["opts"] = o.opts;
  std::vector<std::uint32_t> all(nq * o.k);
  double mean_latency_us = 0;

  if (engine == "host") {
    reis_host_model m;
    reis_host_model_default(&m);
    check(reis_host_model_configure(&m, g.config_text.empty() ? nullptr : g.config_text.c_str()));
    check(reis_host_calibrate(&m, dim, g.effective_seed()));
    std::vector<std::uint32_t> idx(reis_dataset_query_count(ds.get()) * o.k);
    double per_query = 0;
    check(reis_host_search(dev.get(), o.db_id, ds.get(), o.k, o.nprobe, o.candidate_multiplier, &m,
                           idx.data(), &per_query, nullptr));
    std::copy(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(all.size()), all.begin());
    mean_latency_us = per_query * 1e6;
    j["queries"] = ordered_json::array();
    for (std::uint64_t q = 0; q < nq; ++q) {
      j["queries"].push_back({{"query", q},
                              {"indices", std::vector<std::uint32_t>(all.begin() + q * o.k,
                                                                     all.begin() + (q + 1) * o.k)}});
    }
  } else {
    const std::uint32_t threshold = flags.df ? resolve_threshold(dev.get(), ds.get(), o) : dim;
    if (flags.df) j["threshold"] = threshold;
    const auto p = make_params(o, o.nprobe, flags, threshold);
    std::ofstream trace_file;
    TraceWriter tw;
    if (!trace_path.empty()) {
      trace_file.open(trace_path, std::ios::trunc);
      if (!trace_file) data_error("cannot create " + trace_path);
      tw.out = &trace_file;
    }
    j["queries"] = ordered_json::array();
    double total_us = 0;
    for (std::uint64_t q = 0; q < nq; ++q) {
      std::vector<std::int64_t> dist(o.k);
      reis_metrics m{};
      if (tw.out != nullptr) {
        trace_file << read_string([&](char* b, std::size_t c, std::size_t* n) {
          return reis_api_command_json(dev.get(), o.db_id, o.k, b, c, n);
        }) << '\n';
      }
      check(reis_search(dev.get(), o.db_id, reis_dataset_query(ds.get(), q), dim, &p,
                        all.data() + q * o.k, dist.data(), &m,
                        tw.out != nullptr ? &TraceWriter::callback : nullptr, &tw));
      total_us += m.total_ns / 1000.0;
      ordered_json docs = ordered_json::array();
      for (std::uint32_t i = 0; i < o.k; ++i) {
        const char* data = nullptr;
        std::size_t len = 0;
        check(reis_document(dev.get(), o.db_id, all[q * o.k + i], &data, &len));
        docs.push_back(std::string(data, len));
      }
      j["queries"].push_back(
          {{"query", q},
           {"indices", std::vector<std::uint32_t>(all.begin() + q * o.k,
                                                  all.begin() + (q + 1) * o.k)},
           {"distances", dist},
           {"documents", docs},
           {"metrics", metrics_json(m)}});
    }
    mean_latency_us = total_us / static_cast<double>(nq);
    j["qps"] = report::qps(nq, total_us);
  }
  j["mean_latency_us"] = mean_latency_us;
  std::uint32_t tk = 0;
  if (const auto* truth = truth_rows(ds.get(), o.k, want_recall, &tk)) {
    double sum = 0;
    for (std::uint64_t q = 0; q < nq; ++q) {
      sum += reis_recall_at_k(all.data() + q * o.k, truth + q * tk, o.k);
    }
    j["recall"] = sum / static_cast<double>(nq);
  }
  const std::string text = j.dump(2) + "\n";
  if (g.out.empty()) std::cout << text;
  else write_text(g.out, text);
  return 0;
}

int cmd_trace(const Globals& g, const std::string& image, const std::string& dataset,
              SearchOptions o, std::uint64_t query) {
  if (image.empty()) usage_error("--image is required");
  auto dev = open_image(image);
  auto ds = open_dataset(dataset, 0);
  if (!o.queries_path.empty()) check(reis_dataset_load_queries(ds.get(), o.queries_path.c_str()));
  if (query >= reis_dataset_query_count(ds.get())) {
    usage_error("--query " + std::to_string(query) + " is out of range");
  }
  const OptFlags flags = parse_opts(o.opts);
  const std::uint32_t dim = reis_dataset_dim(ds.get());
  const std::uint32_t threshold = flags.df ? resolve_threshold(dev.get(), ds.get(), o) : dim;
  const auto p = make_params(o, o.nprobe, flags, threshold);
  std::ostringstream buf;
  TraceWriter tw{&buf};
  buf << read_string([&](char* b, std::size_t c, std::size_t* n) {
    return reis_api_command_json(dev.get(), o.db_id, o.k, b, c, n);
  }) << '\n';
  std::vector<std::uint32_t> idx(o.k);
  reis_metrics m{};
  check(reis_search(dev.get(), o.db_id, reis_dataset_query(ds.get(), query), dim, &p, idx.data(),
                    nullptr, &m, &TraceWriter::callback, &tw));
  if (g.out.empty()) std::cout << buf.str();
  else write_text(g.out, buf.str());
  return 0;
}

struct BenchTarget {
  Device device;
  std::string preset;
};

int cmd_bench(const Globals& g, const std::string& dataset, const std::vector<std::string>& images,
              std::vector<std::string> presets, const std::string& mode, std::uint32_t nlist,
              SearchOptions o, std::vector<std::uint32_t> nprobes, std::vector<std::string> opt_list,
              bool with_host) {
  const std::string out = g.require_out("bench");
  if (nprobes.empty()) nprobes = {1};
  if (opt_list.empty()) opt_list = {"none", "df", "df+pl", "df+pl+mpibc"};
  for (const auto& s : opt_list) parse_opts(s);
  auto ds = open_dataset(dataset, 0);
  if (!o.queries_path.empty()) check(reis_dataset_load_queries(ds.get(), o.queries_path.c_str()));
  const std::uint64_t nq = query_count(ds.get(), o);
  const std::uint32_t dim = reis_dataset_dim(ds.get());

  std::vector<BenchTarget> targets;
  if (!images.empty()) {
    for (const auto& dir : images) {
      auto dev = open_image(dir);
      std::string preset = reis_device_preset(dev.get());
      targets.push_back({std::move(dev), preset});
    }
  } else {
    if (mode != "flat" && mode != "ivf") usage_error("--mode must be flat or ivf");
    if (presets.empty()) presets = {g.preset.empty() ? std::string("reis-ssd1") : g.preset};
    for (const auto& preset : presets) {
      auto dev = g.make_device(preset);
      reis_deploy_params p;
      reis_deploy_params_default(&p);
      p.db_id = o.db_id;
      p.mode = mode == "ivf" ? REIS_MODE_IVF : REIS_MODE_FLAT;
      p.nlist = nlist;
      p.seed = g.effective_seed();
      check(reis_deploy(dev.get(), ds.get(), &p));
      targets.push_back({std::move(dev), preset});
    }
  }

  std::uint32_t tk = 0;
  const std::uint32_t* truth = truth_rows(ds.get(), o.k, true, &tk);
  std::optional<reis_host_model> host;
  if (with_host) {
    reis_host_model m;
    reis_host_model_default(&m);
    check(reis_host_model_configure(&m, g.config_text.empty() ? nullptr : g.config_text.c_str()));
    check(reis_host_calibrate(&m, dim, g.effective_seed()));
    host = m;
  }

  report::RunReport run;
  run.generated = timestamp();
  run.k = o.k;
  for (auto& t : targets) {
    reis_db_info info{};
    check(reis_db_info_get(t.device.get(), o.db_id, &info));
    const bool ivf = info.mode == REIS_MODE_IVF;
    std::vector<std::uint32_t> probes = ivf ? nprobes : std::vector<std::uint32_t>{0};
    std::optional<std::uint32_t> threshold;
    for (const auto& s : opt_list) {
      if (parse_opts(s).df && !threshold) threshold = resolve_threshold(t.device.get(), ds.get(), o);
    }
    for (std::uint32_t np : probes) {
      std::optional<double> host_load_us, host_scan_us;
      if (host) {
        std::vector<std::uint32_t> idx(reis_dataset_query_count(ds.get()) * o.k);
        double per_query = 0;
        double load_s = 0;
        check(reis_host_search(t.device.get(), o.db_id, ds.get(), o.k, ivf ? np : 1,
                               o.candidate_multiplier, &*host, idx.data(), &per_query, nullptr));
        check(reis_host_load_seconds(t.device.get(), o.db_id, &*host, &load_s));
        host_load_us = load_s * 1e6;
        host_scan_us = (per_query - load_s) * 1e6;
      }
      for (const auto& s : opt_list) {
        const OptFlags f = parse_opts(s);
        const auto p = make_params(o, ivf ? np : 1, f, threshold.value_or(dim));
        std::vector<double> lat;
        double energy = 0, recall = 0, pages = 0;
        std::uint64_t scanned = 0, filtered = 0;
        std::vector<std::uint32_t> idx(o.k);
        for (std::uint64_t q = 0; q < nq; ++q) {
          reis_metrics m{};
          check(reis_search(t.device.get(), o.db_id, reis_dataset_query(ds.get(), q), dim, &p,
                            idx.data(), nullptr, &m, nullptr, nullptr));
          lat.push_back(m.total_ns / 1000.0);
          energy += m.energy_uj;
          pages += static_cast<double>(m.pages_read);
          scanned += m.entries_scanned;
          filtered += m.entries_filtered;
          if (truth != nullptr) recall += reis_recall_at_k(idx.data(), truth + q * tk, o.k);
        }
        double total = 0;
        for (double v : lat) total += v;
        report::RunRow row;
        row.preset = t.preset;
        row.mode = ivf ? "ivf" : "flat";
        row.nprobe = np;
        if (f.df) row.threshold = threshold;
        row.opts = s;
        row.queries = nq;
        row.qps = report::qps(nq, total);
        row.mean_latency_us = total / static_cast<double>(nq);
        row.p50_latency_us = report::percentile(lat, 50);
        row.p99_latency_us = report::percentile(lat, 99);
        row.energy_uj = energy / static_cast<double>(nq);
        row.recall = recall / static_cast<double>(nq);
        row.filtered_pct = scanned > 0 ? 100.0 * static_cast<double>(filtered) / scanned : 0.0;
        row.pages_read = pages / static_cast<double>(nq);
        row.host_load_us = host_load_us;
        row.host_scan_us = host_scan_us;
        run.rows.push_back(std::move(row));
      }
    }
  }
  const std::string csv = report::to_csv(run);
  write_text((fs::path(out) / "run.csv").string(), csv);
  write_text((fs::path(out) / "run.json").string(), report::to_json(run));
  std::cout << csv;
  return 0;
}

int cmd_report(const Globals& g, const std::vector<std::string>& files) {
  if (files.empty()) usage_error("report needs at least one run file");
  std::vector<report::RunReport> runs;
  for (const auto& f : files) {
    try {
      runs.push_back(report::parse_report(read_text(f)));
    } catch (const report::ReportError& e) {
      data_error(f + ": " + e.what());
    }
  }
  report::RunReport merged;
  try {
    merged = report::merge(runs);
  } catch (const report::ReportError& e) {
    data_error(e.what());
  }
  if (merged.rows.empty()) data_error("run files contain no rows");
  const auto cmp = report::compare(merged);
  const std::string comparison = report::comparison_csv(cmp);

  reis_host_model m;
  reis_host_model_default(&m);
  check(reis_host_model_configure(&m, g.config_text.empty() ? nullptr : g.config_text.c_str()));
  std::ostringstream breakdown;
  breakdown << "system,stage,seconds,percent\n";
  auto emit = [&](const std::string& system, double loading_s, double retrieval_s) {
    reis_breakdown_row rows[6];
    check(reis_breakdown(&m, loading_s, retrieval_s, rows));
    for (const auto& r : rows) {
      breakdown << system << ',' << r.stage << ',' << report::format_double(r.seconds) << ','
                << report::format_double(r.percent) << "\n";
    }
  };
  for (const auto& preset : cmp.presets) {
    const report::RunRow* best = nullptr;
    for (const auto& r : merged.rows) {
      if (r.preset == preset && (best == nullptr || r.mean_latency_us < best->mean_latency_us)) {
        best = &r;
      }
    }
    emit(preset, 0.0, best->mean_latency_us / 1e6);
    if (best->host_load_us && best->host_scan_us) {
      emit("host@" + preset, *best->host_load_us / 1e6, *best->host_scan_us / 1e6);
    }
  }

  std::cout << comparison << "\n" << breakdown.str();
  if (!g.out.empty()) {
    write_text((fs::path(g.out) / "merged.csv").string(), report::to_csv(merged));
    write_text((fs::path(g.out) / "comparison.csv").string(), comparison);
    write_text((fs::path(g.out) / "breakdown.csv").string(), breakdown.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"In-storage retrieval simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config_path, "key = value configuration file");
  app.add_option("--preset", g.preset, "Device preset (reis-ssd1, reis-ssd2)");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--out", g.out, "Output file or directory");

  reis_generator_params gen;
  reis_generator_params_default(&gen);
  std::string gen_name = "synthetic";
  std::uint32_t gen_gt = 10;
  auto* generate = app.add_subcommand("generate", "Write a synthetic clustered dataset");
  generate->add_option("--n", gen.n, "Vectors");
  generate->add_option("--d,--dim", gen.dim, "Dimension");
  generate->add_option("--clusters", gen.clusters, "Gaussian blobs");
  generate->add_option("--latent-dim", gen.latent_dim, "Per-blob subspace dimension");
  generate->add_option("--spread", gen.spread, "Blob spread");
  generate->add_option("--noise", gen.noise, "Isotropic noise");
  generate->add_option("--queries", gen.queries, "Queries");
  generate->add_option("--doc-min", gen.doc_min_bytes, "Shortest document (bytes)");
  generate->add_option("--doc-max", gen.doc_max_bytes, "Longest document (bytes)");
  generate->add_option("--name", gen_name, "Dataset name");
  generate->add_option("--ground-truth", gen_gt, "Ground-truth depth (0 disables)");

  std::string ing_name = "dataset", ing_vectors, ing_docs, ing_queries;
  auto* ingest = app.add_subcommand("ingest", "Validate files and write a manifest");
  ingest->add_option("--name", ing_name, "Dataset name");
  ingest->add_option("--vectors", ing_vectors, "RVEC vector file")->required();
  ingest->add_option("--documents", ing_docs, "Length-prefixed document file")->required();
  ingest->add_option("--queries", ing_queries, "RVEC query file");

  std::string dep_dataset, dep_mode = "flat";
  std::uint32_t dep_nlist = 0, dep_iters = 25, dep_train = 64;
  unsigned dep_db = 0;
  auto* deploy = app.add_subcommand("deploy", "Deploy a dataset into a device image");
  deploy->add_option("--dataset", dep_dataset, "Manifest or dataset directory")->required();
  deploy->add_option("--mode", dep_mode, "flat | ivf");
  deploy->add_option("--nlist", dep_nlist, "IVF clusters (default sqrt(n))");
  deploy->add_option("--kmeans-iters", dep_iters, "k-means iterations");
  deploy->add_option("--train-per-cluster", dep_train,
                     "k-means training vectors per cluster (0 = all)");
  deploy->add_option("--db-id", dep_db, "Database id")->check(CLI::Range(0, 255));

  std::string s_image, s_dataset, s_engine = "reis", s_trace;
  bool s_recall = false;
  SearchOptions s_opts;
  auto* search = app.add_subcommand("search", "Run queries against a device image");
  search->add_option("--image", s_image, "Device image directory");
  search->add_option("--dataset", s_dataset, "Manifest or dataset directory");
  search->add_option("--engine", s_engine, "reis | host");
  search->add_option("--trace", s_trace, "Write the command stream as JSON lines");
  search->add_flag("--recall", s_recall, "Compute ground truth when none is cached");
  s_opts.add_to(search, true);

  std::string t_image, t_dataset;
  std::uint64_t t_query = 0;
  SearchOptions t_opts;
  auto* trace = app.add_subcommand("trace", "Dump the command stream of one query");
  trace->add_option("--image", t_image, "Device image directory");
  trace->add_option("--dataset", t_dataset, "Manifest or dataset directory");
  trace->add_option("--query", t_query, "Query index");
  t_opts.add_to(trace, true);

  std::string b_dataset, b_mode = "flat";
  std::vector<std::string> b_images, b_presets, b_opt_list;
  std::vector<std::uint32_t> b_nprobes;
  std::uint32_t b_nlist = 0;
  bool b_host = false;
  SearchOptions b_opts;
  auto* bench = app.add_subcommand("bench", "Sweep configurations and write a run report");
  bench->add_option("--dataset", b_dataset, "Manifest or dataset directory")->required();
  bench->add_option("--image", b_images, "Device images (repeatable)");
  bench->add_option("--presets", b_presets, "Deploy in memory on these presets")->delimiter(',');
  bench->add_option("--mode", b_mode, "flat | ivf (in-memory deployment)");
  bench->add_option("--nlist", b_nlist, "IVF clusters (in-memory deployment)");
  bench->add_option("--nprobe", b_nprobes, "nprobe values")->delimiter(',');
  bench->add_option("--opts", b_opt_list, "Optimization sets")->delimiter(',');
  bench->add_flag("--host", b_host, "Also model the host baseline");
  b_opts.add_to(bench, false);

  std::vector<std::string> r_files;
  auto* report_cmd = app.add_subcommand("report", "Merge run reports into comparison tables");
  report_cmd->add_option("runs", r_files, "Run files (CSV or JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    g.load();
    if (*generate) return cmd_generate(g, gen, gen_name, gen_gt);
    if (*ingest) return cmd_ingest(g, ing_name, ing_vectors, ing_docs, ing_queries);
    if (*deploy) {
      return cmd_deploy(g, dep_dataset, dep_mode, dep_nlist, dep_iters, dep_train,
                        static_cast<std::uint8_t>(dep_db));
    }
    if (*search) return cmd_search(g, s_image, s_dataset, s_opts, s_engine, s_trace, s_recall);
    if (*trace) return cmd_trace(g, t_image, t_dataset, t_opts, t_query);
    if (*bench) {
      return cmd_bench(g, b_dataset, b_images, b_presets, b_mode, b_nlist, b_opts, b_nprobes,
                       b_opt_list, b_host);
    }
    if (*report_cmd) return cmd_report(g, r_files);
  } catch (const CliError& e) {
    std::cerr << "reis_sim: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "reis_sim: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
