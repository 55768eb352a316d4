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


#include "reis/reis.h"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <limits>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "common/binary_io.hpp"
#include "common/error.hpp"
#include "dataset/dataset.hpp"
#include "engine/engine.hpp"
#include "host/baseline.hpp"
#include "ivf/ivf_index.hpp"
#include "layout/image.hpp"
#include "ssd/config.hpp"
#include "vectordb/quantizer.hpp"

struct reis_dataset {
  std::string name;
  reis::vdb::VectorSet vectors;
  reis::vdb::VectorSet queries;
  reis::layout::ChunkList documents;
  std::optional<reis::dataset::GeneratorParams> generator;
  std::uint32_t truth_k = 0;
  std::vector<std::uint32_t> truth;  // nq x truth_k
};

struct reis_device {
  explicit reis_device(reis::layout::SsdDevice d) : device(std::move(d)) {}
  reis::engine::Engine& engine() {
    if (!engine_) engine_ = std::make_unique<reis::engine::Engine>(device);
    return *engine_;
  }

  reis::layout::SsdDevice device;

 private:
  std::unique_ptr<reis::engine::Engine> engine_;
};

namespace {

using namespace reis;

thread_local std::string g_last_error;

reis_status fail(reis_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

template <class F>
reis_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return REIS_OK;
  } catch (const Error& e) {
    return fail(static_cast<reis_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(REIS_E_INTERNAL, "out of memory");
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(REIS_E_IO, e.what());
  } catch (const std::exception& e) {
    return fail(REIS_E_INTERNAL, e.what());
  }
}

#define REQUIRE_ARG(cond) REIS_CHECK(cond, kInvalidArgument, "null or invalid argument: " #cond)

reis_status copy_string(const std::string& s, char* buf, std::size_t cap, std::size_t* needed) {
  if (needed != nullptr) *needed = s.size();
  if (buf == nullptr || cap <= s.size()) {
    if (buf != nullptr && cap > 0) buf[0] = '\0';
    return fail(REIS_E_BUFFER_TOO_SMALL, "buffer of " + std::to_string(cap) + " bytes, need " +
                                             std::to_string(s.size() + 1));
  }
  std::memcpy(buf, s.data(), s.size());
  buf[s.size()] = '\0';
  g_last_error.clear();
  return REIS_OK;
}

dataset::GeneratorParams to_core(const reis_generator_params& p) {
  dataset::GeneratorParams g;
  g.n = p.n;
  g.dim = p.dim;
  g.clusters = p.clusters;
  g.latent_dim = p.latent_dim;
  g.spread = p.spread;
  g.noise = p.noise;
  g.queries = p.queries;
  g.seed = p.seed;
  g.doc_min_bytes = p.doc_min_bytes;
  g.doc_max_bytes = p.doc_max_bytes;
  return g;
}

engine::SearchParams to_core(const reis_search_params& p) {
  engine::SearchParams s;
  s.k = p.k;
  s.nprobe = p.nprobe;
  s.candidate_multiplier = p.candidate_multiplier;
  if (p.has_filter_threshold != 0) s.filter_threshold = p.filter_threshold;
  s.enable_df = p.enable_df != 0;
  s.enable_pl = p.enable_pl != 0;
  s.enable_mpibc = p.enable_mpibc != 0;
  return s;
}

host::HostCostModel to_core(const reis_host_model& m) {
  host::HostCostModel h;
  h.storage_read_bw_gbps = m.storage_read_bw_gbps;
  h.hamming_vectors_per_us = m.hamming_vectors_per_us;
  h.int8_vectors_per_us = m.int8_vectors_per_us;
  h.fp32_vectors_per_us = m.fp32_vectors_per_us;
  h.embedding_model_load_s = m.embedding_model_load_s;
  h.encoding_s = m.encoding_s;
  h.generation_model_load_s = m.generation_model_load_s;
  h.generation_s = m.generation_s;
  return h;
}

void from_core(const host::HostCostModel& h, reis_host_model* m) {
  m->storage_read_bw_gbps = h.storage_read_bw_gbps;
  m->hamming_vectors_per_us = h.hamming_vectors_per_us;
  m->int8_vectors_per_us = h.int8_vectors_per_us;
  m->fp32_vectors_per_us = h.fp32_vectors_per_us;
  m->embedding_model_load_s = h.embedding_model_load_s;
  m->encoding_s = h.encoding_s;
  m->generation_model_load_s = h.generation_model_load_s;
  m->generation_s = h.generation_s;
}

engine::TraceEvent to_core(const reis_trace_event& e) {
  engine::TraceEvent t;
  t.seq = e.seq;
  t.phase = static_cast<engine::Phase>(e.phase);
  t.command = static_cast<engine::FlashCommand>(e.command);
  t.iteration = e.iteration;
  t.channel = e.channel;
  t.plane = e.plane;
  t.page = e.page;
  t.value = e.value;
  t.latency_ns = e.latency_ns;
  return t;
}

void fill_metrics(const engine::SearchMetrics& m, reis_metrics* out) {
  out->ibc_ns = m.latency.ibc;
  out->scan_ns = m.latency.scan;
  out->transfer_ns = m.latency.transfer;
  out->select_ns = m.latency.select;
  out->rerank_ns = m.latency.rerank;
  out->doc_fetch_ns = m.latency.doc_fetch;
  out->total_ns = m.latency.total();
  out->energy_uj = m.energy_uj();
  out->entries_scanned = m.entries_scanned;
  out->entries_transferred = m.entries_transferred;
  out->entries_filtered = m.entries_filtered;
  out->pages_read = m.pages_read;
  out->channel_bytes = m.channel_bytes;
  out->iterations = m.iterations;
}

std::uint32_t doc_limit(std::uint32_t max_document_bytes) {
  return max_document_bytes == 0 ? std::numeric_limits<std::uint32_t>::max() : max_document_bytes;
}

void flatten_truth(reis_dataset& ds, const host::GroundTruth& gt, std::uint32_t k) {
  ds.truth.clear();
  ds.truth.reserve(gt.size() * k);
  for (const auto& row : gt) {
    REIS_CHECK(row.size() == k, kFormat, "ground truth row of " << row.size() << " != k " << k);
    ds.truth.insert(ds.truth.end(), row.begin(), row.end());
  }
  ds.truth_k = k;
}

}  // namespace

extern "C" {

const char* reis_last_error(void) { return g_last_error.c_str(); }

const char* reis_status_name(reis_status s) {
  switch (s) {
    case REIS_OK: return "ok";
    case REIS_E_INVALID_ARGUMENT: return "invalid argument";
    case REIS_E_DIMENSION_MISMATCH: return "dimension mismatch";
    case REIS_E_CAPACITY_EXCEEDED: return "capacity exceeded";
    case REIS_E_OUT_OF_RANGE: return "out of range";
    case REIS_E_FORMAT: return "format error";
    case REIS_E_IO: return "i/o error";
    case REIS_E_NOT_FOUND: return "not found";
    case REIS_E_BUFFER_TOO_SMALL: return "buffer too small";
    case REIS_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* reis_version(void) { return "0.1.0"; }

reis_status reis_config_get(const char* config_text, const char* key, char* buf, size_t cap,
                            size_t* needed) {
  std::string value;
  const auto s = guarded([&] {
    REQUIRE_ARG(config_text != nullptr && key != nullptr);
    const auto kv = ssd::parse_key_values(config_text);
    auto it = kv.find(key);
    REIS_CHECK(it != kv.end(), kNotFound, "config has no key '" << key << "'");
    value = it->second;
  });
  if (s != REIS_OK) return s;
  return copy_string(value, buf, cap, needed);
}

// ---------------------------------------------------------------- datasets

void reis_generator_params_default(reis_generator_params* p) {
  if (p == nullptr) return;
  const dataset::GeneratorParams g;
  p->n = g.n;
  p->dim = g.dim;
  p->clusters = g.clusters;
  p->latent_dim = g.latent_dim;
  p->spread = g.spread;
  p->noise = g.noise;
  p->queries = g.queries;
  p->seed = g.seed;
  p->doc_min_bytes = g.doc_min_bytes;
  p->doc_max_bytes = g.doc_max_bytes;
}

reis_status reis_dataset_generate(const reis_generator_params* p, const char* name,
                                  reis_dataset** out) {
  return guarded([&] {
    REQUIRE_ARG(p != nullptr && out != nullptr);
    const auto g = to_core(*p);
    auto data = dataset::generate(g);
    auto ds = std::make_unique<reis_dataset>();
    ds->name = name != nullptr ? name : "synthetic";
    ds->vectors = std::move(data.vectors);
    ds->queries = std::move(data.queries);
    ds->documents = std::move(data.documents);
    ds->generator = g;
    *out = ds.release();
  });
}

reis_status reis_dataset_open(const char* manifest_path, uint32_t max_document_bytes,
                              reis_dataset** out) {
  return guarded([&] {
    REQUIRE_ARG(manifest_path != nullptr && out != nullptr);
    const std::string path = manifest_path;
    const auto m = dataset::read_manifest(path);
    dataset::validate_files(path, m, doc_limit(max_document_bytes));
    auto ds = std::make_unique<reis_dataset>();
    ds->name = m.name;
    ds->generator = m.generator;
    ds->vectors = dataset::read_rvec(dataset::resolve(path, m.vectors_path));
    ds->documents = dataset::read_documents(dataset::resolve(path, m.documents_path));
    ds->queries = vdb::VectorSet(m.dim);
    if (m.queries_path) ds->queries = dataset::read_rvec(dataset::resolve(path, *m.queries_path));
    if (m.ground_truth_path) {
      std::uint32_t k = 0;
      const auto gt = host::deserialize_ground_truth(
          read_file(dataset::resolve(path, *m.ground_truth_path)), &k);
      REIS_CHECK(gt.size() == ds->queries.size(), kFormat,
                 "ground truth has " << gt.size() << " rows for " << ds->queries.size()
                                     << " queries");
      flatten_truth(*ds, gt, k);
    }
    *out = ds.release();
  });
}

reis_status reis_dataset_ingest(const char* name, const char* vectors_path,
                                const char* documents_path, const char* queries_path,
                                const char* manifest_path, uint32_t max_document_bytes) {
  return guarded([&] {
    REQUIRE_ARG(name != nullptr && vectors_path != nullptr && documents_path != nullptr &&
                manifest_path != nullptr);
    namespace fs = std::filesystem;
    dataset::Manifest m;
    m.name = name;
    m.vectors_path = fs::absolute(vectors_path).string();
    m.documents_path = fs::absolute(documents_path).string();
    if (queries_path != nullptr) m.queries_path = fs::absolute(queries_path).string();
    const auto [dim, n] = dataset::read_rvec_header(m.vectors_path);
    m.dim = dim;
    m.n_vectors = n;
    dataset::validate_files(manifest_path, m, doc_limit(max_document_bytes));
    const auto parent = fs::path(manifest_path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
    dataset::write_manifest(manifest_path, m);
  });
}

reis_status reis_dataset_save(const reis_dataset* ds, const char* dir) {
  return guarded([&] {
    REQUIRE_ARG(ds != nullptr && dir != nullptr);
    namespace fs = std::filesystem;
    const fs::path root(dir);
    fs::create_directories(root);
    dataset::Manifest m;
    m.name = ds->name;
    m.dim = static_cast<std::uint32_t>(ds->vectors.dim());
    m.n_vectors = ds->vectors.size();
    m.vectors_path = "vectors.rvec";
    m.documents_path = "documents.bin";
    m.generator = ds->generator;
    dataset::write_rvec((root / m.vectors_path).string(), ds->vectors);
    dataset::write_documents((root / m.documents_path).string(), ds->documents);
    if (!ds->queries.empty()) {
      m.queries_path = "queries.rvec";
      dataset::write_rvec((root / *m.queries_path).string(), ds->queries);
    }
    if (ds->truth_k > 0) {
      m.ground_truth_path = "ground_truth.rgtk";
      host::GroundTruth gt(ds->queries.size());
      for (std::size_t q = 0; q < gt.size(); ++q) {
        const auto* row = ds->truth.data() + q * ds->truth_k;
        gt[q].assign(row, row + ds->truth_k);
      }
      write_file((root / *m.ground_truth_path).string(),
                 host::serialize_ground_truth(gt, ds->truth_k));
    }
    dataset::write_manifest((root / "manifest.json").string(), m);
  });
}

reis_status reis_dataset_load_queries(reis_dataset* ds, const char* rvec_path) {
  return guarded([&] {
    REQUIRE_ARG(ds != nullptr && rvec_path != nullptr);
    auto q = dataset::read_rvec(rvec_path);
    REIS_CHECK(q.dim() == ds->vectors.dim(), kDimensionMismatch,
               "queries have D=" << q.dim() << ", dataset D=" << ds->vectors.dim());
    ds->queries = std::move(q);
    ds->truth.clear();
    ds->truth_k = 0;
  });
}

void reis_dataset_free(reis_dataset* ds) { delete ds; }

uint32_t reis_dataset_dim(const reis_dataset* ds) {
  return ds == nullptr ? 0 : static_cast<uint32_t>(ds->vectors.dim());
}
uint64_t reis_dataset_size(const reis_dataset* ds) { return ds == nullptr ? 0 : ds->vectors.size(); }
uint64_t reis_dataset_query_count(const reis_dataset* ds) {
  return ds == nullptr ? 0 : ds->queries.size();
}
const float* reis_dataset_query(const reis_dataset* ds, uint64_t i) {
  if (ds == nullptr || i >= ds->queries.size()) return nullptr;
  return ds->queries.row(i).data();
}

reis_status reis_dataset_ground_truth(reis_dataset* ds, uint32_t k) {
  return guarded([&] {
    REQUIRE_ARG(ds != nullptr && k > 0);
    if (ds->truth_k >= k) return;
    flatten_truth(*ds, host::exact_ground_truth(ds->queries, ds->vectors, k), k);
  });
}

reis_status reis_dataset_truth(const reis_dataset* ds, uint32_t* k, const uint32_t** rows) {
  return guarded([&] {
    REQUIRE_ARG(ds != nullptr && k != nullptr && rows != nullptr);
    REIS_CHECK(ds->truth_k > 0, kNotFound, "no ground truth computed or loaded");
    *k = ds->truth_k;
    *rows = ds->truth.data();
  });
}

double reis_recall_at_k(const uint32_t* result, const uint32_t* truth, uint32_t k) {
  if (result == nullptr || truth == nullptr || k == 0) return 0.0;
  return host::recall_at_k({result, k}, {truth, k}, k);
}

// ------------------------------------------------------------------ device

size_t reis_preset_count(void) { return ssd::preset_names().size(); }

const char* reis_preset_name(size_t i) {
  static const std::vector<std::string> names = ssd::preset_names();
  return i < names.size() ? names[i].c_str() : nullptr;
}

reis_status reis_device_create(const char* preset, const char* config_text, reis_device** out) {
  return guarded([&] {
    REQUIRE_ARG(out != nullptr);
    ssd::KeyValues kv;
    if (config_text != nullptr) kv = ssd::parse_key_values(config_text);
    if (preset != nullptr) kv["preset"] = preset;
    *out = new reis_device(layout::SsdDevice(ssd::ssd_config_from(kv)));
  });
}

reis_status reis_device_open(const char* image_dir, reis_device** out) {
  return guarded([&] {
    REQUIRE_ARG(image_dir != nullptr && out != nullptr);
    *out = new reis_device(layout::load_image(image_dir));
  });
}

reis_status reis_device_save(const reis_device* dev, const char* image_dir) {
  return guarded([&] {
    REQUIRE_ARG(dev != nullptr && image_dir != nullptr);
    layout::save_image(dev->device, image_dir);
  });
}

void reis_device_free(reis_device* dev) { delete dev; }

reis_status reis_device_config_text(const reis_device* dev, char* buf, size_t cap, size_t* needed) {
  if (dev == nullptr) return fail(REIS_E_INVALID_ARGUMENT, "null device");
  return copy_string(ssd::format_key_values(ssd::to_key_values(dev->device.config())), buf, cap,
                     needed);
}

reis_status reis_device_geometry(const reis_device* dev, reis_geometry* out) {
  return guarded([&] {
    REQUIRE_ARG(dev != nullptr && out != nullptr);
    const auto& g = dev->device.geometry();
    out->channels = g.channels;
    out->dies_per_channel = g.dies_per_channel;
    out->planes_per_die = g.planes_per_die;
    out->page_size = g.page_size;
    out->subpage_size = g.subpage_size;
    out->oob_size = g.oob_size;
    out->total_pages = g.total_pages();
    out->allocated_pages = dev->device.allocated_pages();
  });
}

const char* reis_device_preset(const reis_device* dev) {
  return dev == nullptr ? "" : dev->device.config().preset.c_str();
}

void reis_deploy_params_default(reis_deploy_params* p) {
  if (p == nullptr) return;
  p->db_id = 0;
  p->mode = REIS_MODE_FLAT;
  p->nlist = 0;
  p->kmeans_iters = 25;
  p->training_points_per_cluster = 64;
  p->seed = 0;
}

reis_status reis_deploy(reis_device* dev, const reis_dataset* ds, const reis_deploy_params* p) {
  return guarded([&] {
    REQUIRE_ARG(dev != nullptr && ds != nullptr && p != nullptr);
    REQUIRE_ARG(p->mode == REIS_MODE_FLAT || p->mode == REIS_MODE_IVF);
    const auto q = vdb::train_quantizer(ds->vectors);
    if (p->mode == REIS_MODE_FLAT) {
      dev->device.deploy_flat(p->db_id, ds->vectors, ds->documents, q);
      return;
    }
    ivf::KmeansParams kp;
    kp.nlist = p->nlist != 0 ? p->nlist : ivf::default_nlist(ds->vectors.size());
    kp.max_iters = p->kmeans_iters;
    kp.seed = p->seed;
    kp.max_training_points = std::size_t{p->training_points_per_cluster} * kp.nlist;
    const auto index = ivf::build_index(ds->vectors, kp);
    dev->device.deploy_ivf(p->db_id, ds->vectors, ds->documents, index, q);
  });
}

reis_status reis_db_ids(const reis_device* dev, uint8_t* ids, size_t cap, size_t* count) {
  return guarded([&] {
    REQUIRE_ARG(dev != nullptr && count != nullptr);
    const auto v = dev->device.database_ids();
    *count = v.size();
    REIS_CHECK(ids != nullptr || v.empty() || cap == 0, kInvalidArgument, "null id buffer");
    for (std::size_t i = 0; i < v.size() && i < cap; ++i) ids[i] = v[i];
  });
}

reis_status reis_db_info_get(const reis_device* dev, uint8_t db_id, reis_db_info* out) {
  return guarded([&] {
    REQUIRE_ARG(dev != nullptr && out != nullptr);
    const auto& db = dev->device.database(db_id);
    out->db_id = db.db_id;
    out->mode = db.mode == layout::DeployMode::kIvf ? REIS_MODE_IVF : REIS_MODE_FLAT;
    out->dim = db.dim;
    out->size = db.size;
    out->nlist = db.nlist();
    out->documents = db.documents.size();
    out->occupied_pages = db.occupied_pages();
    out->image_bytes = db.image_bytes(dev->device.geometry());
  });
}

reis_status reis_rdb_entry(const reis_device* dev, uint8_t db_id, uint8_t out[21]) {
  return guarded([&] {
    REQUIRE_ARG(dev != nullptr && out != nullptr);
    const auto bytes = layout::pack_rdb(dev->device.database(db_id).rdb);
    std::memcpy(out, bytes.data(), bytes.size());
  });
}

reis_status reis_rivf_entry(const reis_device* dev, uint8_t db_id, uint32_t cluster,
                            uint8_t out[15]) {
  return guarded([&] {
    REQUIRE_ARG(dev != nullptr && out != nullptr);
    const auto& db = dev->device.database(db_id);
    REIS_CHECK(cluster < db.nlist(), kOutOfRange,
               "cluster " << cluster << " of " << db.nlist());
    const auto bytes = layout::pack_rivf(db.rivf[cluster]);
    std::memcpy(out, bytes.data(), bytes.size());
  });
}

reis_status reis_document(const reis_device* dev, uint8_t db_id, uint32_t index, const char** data,
                          size_t* len) {
  return guarded([&] {
    REQUIRE_ARG(dev != nullptr && data != nullptr && len != nullptr);
    const auto& db = dev->device.database(db_id);
    REIS_CHECK(index < db.size, kOutOfRange, "vector " << index << " of " << db.size);
    const auto chunk = db.documents.chunk(db.doc_of_vector[index]);
    *data = chunk.data();
    *len = chunk.size();
  });
}

// ------------------------------------------------------------------ search

void reis_search_params_default(reis_search_params* p) {
  if (p == nullptr) return;
  const engine::SearchParams s;
  p->k = s.k;
  p->nprobe = s.nprobe;
  p->candidate_multiplier = s.candidate_multiplier;
  p->has_filter_threshold = 0;
  p->filter_threshold = 0;
  p->enable_df = 0;
  p->enable_pl = 0;
  p->enable_mpibc = 0;
}

reis_status reis_search(reis_device* dev, uint8_t db_id, const float* query, uint32_t dim,
                        const reis_search_params* p, uint32_t* indices, int64_t* distances,
                        reis_metrics* metrics, reis_trace_fn trace, void* user) {
  return guarded([&] {
    REQUIRE_ARG(dev != nullptr && query != nullptr && p != nullptr && indices != nullptr);
    engine::TraceSink sink;
    if (trace != nullptr) {
      sink = [trace, user](const engine::TraceEvent& e) {
        reis_trace_event c{};
        c.seq = e.seq;
        c.phase = static_cast<uint8_t>(e.phase);
        c.command = static_cast<uint8_t>(e.command);
        c.iteration = e.iteration;
        c.channel = e.channel;
        c.plane = e.plane;
        c.page = e.page;
        c.value = e.value;
        c.latency_ns = e.latency_ns;
        trace(&c, user);
      };
    }
    const auto r = dev->engine().search({query, dim}, db_id, to_core(*p), sink);
    for (std::size_t i = 0; i < r.topk.size(); ++i) {
      indices[i] = r.topk[i].dataset_index;
      if (distances != nullptr) distances[i] = r.topk[i].distance;
    }
    if (metrics != nullptr) fill_metrics(r.metrics, metrics);
  });
}

reis_status reis_trace_event_json(const reis_trace_event* e, char* buf, size_t cap,
                                  size_t* needed) {
  if (e == nullptr) return fail(REIS_E_INVALID_ARGUMENT, "null event");
  return copy_string(engine::to_json_line(to_core(*e)), buf, cap, needed);
}

reis_status reis_api_command_json(const reis_device* dev, uint8_t db_id, uint32_t k, char* buf,
                                  size_t cap, size_t* needed) {
  std::string line;
  const auto s = guarded([&] {
    REQUIRE_ARG(dev != nullptr);
    const auto& db = dev->device.database(db_id);
    line = engine::api_json_line(db.mode == layout::DeployMode::kIvf
                                     ? engine::ApiCommand::kIvfSearch
                                     : engine::ApiCommand::kSearch,
                                 db_id, k);
  });
  if (s != REIS_OK) return s;
  return copy_string(line, buf, cap, needed);
}

reis_status reis_calibrate_threshold(const reis_device* dev, uint8_t db_id, const reis_dataset* ds,
                                     double keep_fraction, uint32_t guard_rank,
                                     uint32_t* threshold) {
  return guarded([&] {
    REQUIRE_ARG(dev != nullptr && ds != nullptr && threshold != nullptr);
    *threshold = engine::calibrate_filter_threshold(dev->device, dev->device.database(db_id),
                                                    ds->queries, keep_fraction, guard_rank);
  });
}

reis_status reis_ibc_latency(const reis_device* dev, int mpibc, int64_t* ns) {
  return guarded([&] {
    REQUIRE_ARG(dev != nullptr && ns != nullptr);
    *ns = engine::ibc_latency(dev->device.config(), mpibc != 0);
  });
}

// -------------------------------------------------------------------- host

void reis_host_model_default(reis_host_model* m) {
  if (m != nullptr) from_core(host::HostCostModel{}, m);
}

reis_status reis_host_model_configure(reis_host_model* m, const char* config_text) {
  return guarded([&] {
    REQUIRE_ARG(m != nullptr);
    if (config_text == nullptr) return;
    const auto kv = ssd::parse_key_values(config_text);
    const std::pair<const char*, double*> fields[] = {
        {"host.storage_read_bw_gbps", &m->storage_read_bw_gbps},
        {"host.hamming_vectors_per_us", &m->hamming_vectors_per_us},
        {"host.int8_vectors_per_us", &m->int8_vectors_per_us},
        {"host.fp32_vectors_per_us", &m->fp32_vectors_per_us},
        {"host.embedding_model_load_s", &m->embedding_model_load_s},
        {"host.encoding_s", &m->encoding_s},
        {"host.generation_model_load_s", &m->generation_model_load_s},
        {"host.generation_s", &m->generation_s},
    };
    for (const auto& [key, value] : kv) {
      if (!key.starts_with("host.")) continue;
      const bool known = std::any_of(std::begin(fields), std::end(fields),
                                     [&](const auto& f) { return key == f.first; });
      REIS_CHECK(known, kInvalidArgument, "config: unknown key '" << key << "'");
    }
    for (const auto& [key, field] : fields) {
      auto it = kv.find(key);
      if (it == kv.end()) continue;
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(it->second, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      REIS_CHECK(used == it->second.size() && used > 0, kInvalidArgument,
                 "config: bad value '" << it->second << "' for " << key);
      *field = v;
    }
  });
}

reis_status reis_host_calibrate(reis_host_model* m, uint32_t dim, uint64_t seed) {
  return guarded([&] {
    REQUIRE_ARG(m != nullptr && dim > 0);
    from_core(host::calibrate(to_core(*m), dim, seed), m);
  });
}

reis_status reis_host_search(const reis_device* dev, uint8_t db_id, const reis_dataset* ds,
                             uint32_t k, uint32_t nprobe, uint32_t candidate_multiplier,
                             const reis_host_model* m, uint32_t* indices,
                             double* latency_per_query_s, uint64_t* vectors_scanned) {
  return guarded([&] {
    REQUIRE_ARG(dev != nullptr && ds != nullptr && m != nullptr && indices != nullptr);
    host::HostParams hp;
    hp.k = k;
    hp.nprobe = nprobe;
    hp.candidate_multiplier = candidate_multiplier;
    const auto r = host::host_search(dev->device, dev->device.database(db_id), ds->queries, hp,
                                     to_core(*m));
    for (std::size_t q = 0; q < r.indices.size(); ++q) {
      std::copy(r.indices[q].begin(), r.indices[q].end(), indices + q * k);
    }
    if (latency_per_query_s != nullptr) *latency_per_query_s = r.latency_per_query_s();
    if (vectors_scanned != nullptr) *vectors_scanned = r.vectors_scanned;
  });
}

reis_status reis_host_load_seconds(const reis_device* dev, uint8_t db_id, const reis_host_model* m,
                                   double* seconds) {
  return guarded([&] {
    REQUIRE_ARG(dev != nullptr && m != nullptr && seconds != nullptr);
    const auto& db = dev->device.database(db_id);
    *seconds = host::load_seconds(db.image_bytes(dev->device.geometry()), to_core(*m));
  });
}

reis_status reis_breakdown(const reis_host_model* m, double dataset_loading_s, double retrieval_s,
                           reis_breakdown_row rows[6]) {
  static const std::vector<host::BreakdownRow> labels =
      host::end_to_end_breakdown(host::HostCostModel{}, 0.0, 0.0);
  return guarded([&] {
    REQUIRE_ARG(m != nullptr && rows != nullptr);
    const auto r = host::end_to_end_breakdown(to_core(*m), dataset_loading_s, retrieval_s);
    REIS_CHECK(r.size() == 6 && labels.size() == 6, kInternal, "breakdown has " << r.size() << " rows");
    for (std::size_t i = 0; i < 6; ++i) {
      rows[i].stage = labels[i].stage.c_str();
      rows[i].seconds = r[i].seconds;
      rows[i].percent = r[i].percent;
    }
  });
}

}  // extern "C"
