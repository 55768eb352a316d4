/*
 * Copyright 2026-present the reis-sim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef REIS_REIS_H_
#define REIS_REIS_H_

#include <stddef.h>
#include <stdint.h>

#if defined(REIS_BUILDING_LIBRARY)
#define REIS_API __attribute__((visibility("default")))
#else
#define REIS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Every fallible call returns one; details via reis_last_error(). */
typedef enum reis_status {
  REIS_OK = 0,
  REIS_E_INVALID_ARGUMENT = 1,
  REIS_E_DIMENSION_MISMATCH = 2,
  REIS_E_CAPACITY_EXCEEDED = 3,
  REIS_E_OUT_OF_RANGE = 4,
  REIS_E_FORMAT = 5,
  REIS_E_IO = 6,
  REIS_E_NOT_FOUND = 7,
  REIS_E_BUFFER_TOO_SMALL = 8,
  REIS_E_INTERNAL = 99
} reis_status;

/* Message of the last failed call on this thread ("" if none). */
REIS_API const char* reis_last_error(void);
REIS_API const char* reis_status_name(reis_status s);
REIS_API const char* reis_version(void);

/*
 * String results use caller buffers: the call writes at most `cap` bytes
 * including the terminating NUL and always stores the full length (without
 * NUL) in *needed. A short buffer yields REIS_E_BUFFER_TOO_SMALL.
 */

/* Value of `key` in `key = value` text; REIS_E_NOT_FOUND when absent. */
REIS_API reis_status reis_config_get(const char* config_text, const char* key, char* buf,
                                     size_t cap, size_t* needed);

/* ------------------------------------------------------------------ datasets */

typedef struct reis_dataset reis_dataset;

typedef struct reis_generator_params {
  uint64_t n;
  uint32_t dim;
  uint32_t clusters;
  uint32_t latent_dim;
  double spread;
  double noise;
  uint64_t queries;
  uint64_t seed;
  uint32_t doc_min_bytes;
  uint32_t doc_max_bytes;
} reis_generator_params;

REIS_API void reis_generator_params_default(reis_generator_params* p);
REIS_API reis_status reis_dataset_generate(const reis_generator_params* p, const char* name,
                                           reis_dataset** out);
/* Loads a manifest and every file it names. Documents longer than
 * max_document_bytes are rejected (0 disables the check). */
REIS_API reis_status reis_dataset_open(const char* manifest_path, uint32_t max_document_bytes,
                                       reis_dataset** out);
/* Validates existing vector/document/query files and writes a manifest that
 * references them by absolute path. queries_path may be NULL. */
REIS_API reis_status reis_dataset_ingest(const char* name, const char* vectors_path,
                                         const char* documents_path, const char* queries_path,
                                         const char* manifest_path, uint32_t max_document_bytes);
/* Writes manifest.json, vectors.rvec, documents.bin and, when present,
 * queries.rvec and ground_truth.rgtk into dir. */
REIS_API reis_status reis_dataset_save(const reis_dataset* ds, const char* dir);
REIS_API reis_status reis_dataset_load_queries(reis_dataset* ds, const char* rvec_path);
REIS_API void reis_dataset_free(reis_dataset* ds);

REIS_API uint32_t reis_dataset_dim(const reis_dataset* ds);
REIS_API uint64_t reis_dataset_size(const reis_dataset* ds);
REIS_API uint64_t reis_dataset_query_count(const reis_dataset* ds);
/* Row pointer valid while ds lives; NULL when i is out of range. */
REIS_API const float* reis_dataset_query(const reis_dataset* ds, uint64_t i);

/* Exhaustive FP32 ground truth for the dataset's queries, cached in ds.
 * A cached table with k' >= k is reused. */
REIS_API reis_status reis_dataset_ground_truth(reis_dataset* ds, uint32_t k);
/* Row-major nq x k table valid while ds lives. */
REIS_API reis_status reis_dataset_truth(const reis_dataset* ds, uint32_t* k,
                                        const uint32_t** rows);
REIS_API double reis_recall_at_k(const uint32_t* result, const uint32_t* truth, uint32_t k);

/* ------------------------------------------------------------------- device */

typedef struct reis_device reis_device;

REIS_API size_t reis_preset_count(void);
REIS_API const char* reis_preset_name(size_t i);

/* preset may be NULL when config_text names one; config_text holds
 * `key = value` lines and may be NULL. Unknown keys are ignored. */
REIS_API reis_status reis_device_create(const char* preset, const char* config_text,
                                        reis_device** out);
REIS_API reis_status reis_device_open(const char* image_dir, reis_device** out);
REIS_API reis_status reis_device_save(const reis_device* dev, const char* image_dir);
REIS_API void reis_device_free(reis_device* dev);
typedef struct reis_geometry {
  uint32_t channels;
  uint32_t dies_per_channel;
  uint32_t planes_per_die;
  uint32_t page_size;
  uint32_t subpage_size;
  uint32_t oob_size;
  uint64_t total_pages;
  uint64_t allocated_pages;
} reis_geometry;

REIS_API reis_status reis_device_geometry(const reis_device* dev, reis_geometry* out);
/* Preset name the configuration started from. */
REIS_API const char* reis_device_preset(const reis_device* dev);
/* Full configuration as `key = value` lines. */
REIS_API reis_status reis_device_config_text(const reis_device* dev, char* buf, size_t cap,
                                             size_t* needed);

typedef enum reis_mode { REIS_MODE_FLAT = 0, REIS_MODE_IVF = 1 } reis_mode;

typedef struct reis_deploy_params {
  uint8_t db_id;
  reis_mode mode;
  uint32_t nlist; /* 0 = round(sqrt(n)) */
  uint32_t kmeans_iters;
  /* k-means trains on at most this many vectors per cluster (0 = all). */
  uint32_t training_points_per_cluster;
  uint64_t seed;
} reis_deploy_params;

REIS_API void reis_deploy_params_default(reis_deploy_params* p);
/* Trains the quantizer on the dataset vectors, builds the index for IVF
 * mode, and writes everything into the device. */
REIS_API reis_status reis_deploy(reis_device* dev, const reis_dataset* ds,
                                 const reis_deploy_params* p);

typedef struct reis_db_info {
  uint8_t db_id;
  reis_mode mode;
  uint32_t dim;
  uint64_t size;
  uint32_t nlist;
  uint64_t documents;
  uint64_t occupied_pages;
  uint64_t image_bytes;
} reis_db_info;

REIS_API reis_status reis_db_ids(const reis_device* dev, uint8_t* ids, size_t cap, size_t* count);
REIS_API reis_status reis_db_info_get(const reis_device* dev, uint8_t db_id, reis_db_info* out);
/* Packed 21-byte R-DB entry and 15-byte R-IVF entries. */
REIS_API reis_status reis_rdb_entry(const reis_device* dev, uint8_t db_id, uint8_t out[21]);
REIS_API reis_status reis_rivf_entry(const reis_device* dev, uint8_t db_id, uint32_t cluster,
                                     uint8_t out[15]);
/* Document chunk linked to dataset vector `index`; view valid while dev lives. */
REIS_API reis_status reis_document(const reis_device* dev, uint8_t db_id, uint32_t index,
                                   const char** data, size_t* len);

/* ------------------------------------------------------------------- search */

typedef struct reis_search_params {
  uint32_t k;
  uint32_t nprobe;
  uint32_t candidate_multiplier;
  int has_filter_threshold;
  uint32_t filter_threshold;
  int enable_df;
  int enable_pl;
  int enable_mpibc;
} reis_search_params;

REIS_API void reis_search_params_default(reis_search_params* p);

typedef struct reis_metrics {
  int64_t ibc_ns;
  int64_t scan_ns;
  int64_t transfer_ns;
  int64_t select_ns;
  int64_t rerank_ns;
  int64_t doc_fetch_ns;
  int64_t total_ns;
  double energy_uj;
  uint64_t entries_scanned;
  uint64_t entries_transferred;
  uint64_t entries_filtered;
  uint64_t pages_read;
  uint64_t channel_bytes;
  uint32_t iterations;
} reis_metrics;

typedef struct reis_trace_event {
  uint64_t seq;
  uint8_t phase;
  uint8_t command;
  uint32_t iteration;
  uint32_t channel;
  uint32_t plane;
  uint64_t page;
  uint64_t value;
  int64_t latency_ns;
} reis_trace_event;

typedef void (*reis_trace_fn)(const reis_trace_event* e, void* user);

/* One query. indices and distances (may be NULL) receive k entries ordered
 * by (INT8 distance, dataset index). Searches on one device are serialized. */
REIS_API reis_status reis_search(reis_device* dev, uint8_t db_id, const float* query, uint32_t dim,
                                 const reis_search_params* p, uint32_t* indices,
                                 int64_t* distances, reis_metrics* metrics, reis_trace_fn trace,
                                 void* user);
/* JSON line (no newline) for a trace event, and for a host-visible command. */
REIS_API reis_status reis_trace_event_json(const reis_trace_event* e, char* buf, size_t cap,
                                           size_t* needed);
REIS_API reis_status reis_api_command_json(const reis_device* dev, uint8_t db_id, uint32_t k,
                                           char* buf, size_t cap, size_t* needed);
/* Hamming threshold that keeps about keep_fraction of entries for the
 * dataset's queries, raised to cover each query's guard_rank-th distance. */
REIS_API reis_status reis_calibrate_threshold(const reis_device* dev, uint8_t db_id,
                                              const reis_dataset* ds, double keep_fraction,
                                              uint32_t guard_rank, uint32_t* threshold);
/* Modeled input-broadcast latency. */
REIS_API reis_status reis_ibc_latency(const reis_device* dev, int mpibc, int64_t* ns);

/* --------------------------------------------------------------------- host */

typedef struct reis_host_model {
  double storage_read_bw_gbps;
  double hamming_vectors_per_us; /* <= 0: calibrate */
  double int8_vectors_per_us;
  double fp32_vectors_per_us;
  double embedding_model_load_s;
  double encoding_s;
  double generation_model_load_s;
  double generation_s;
} reis_host_model;

REIS_API void reis_host_model_default(reis_host_model* m);
/* Applies `host.<field> = value` keys of config_text. */
REIS_API reis_status reis_host_model_configure(reis_host_model* m, const char* config_text);
REIS_API reis_status reis_host_calibrate(reis_host_model* m, uint32_t dim, uint64_t seed);

/* All dataset queries. indices: nq x k. latency_per_query_s and
 * vectors_scanned may be NULL. */
REIS_API reis_status reis_host_search(const reis_device* dev, uint8_t db_id,
                                      const reis_dataset* ds, uint32_t k, uint32_t nprobe,
                                      uint32_t candidate_multiplier, const reis_host_model* m,
                                      uint32_t* indices, double* latency_per_query_s,
                                      uint64_t* vectors_scanned);
/* Host loading time for a deployed image. */
REIS_API reis_status reis_host_load_seconds(const reis_device* dev, uint8_t db_id,
                                            const reis_host_model* m, double* seconds);

typedef struct reis_breakdown_row {
  const char* stage; /* static string */
  double seconds;
  double percent;
} reis_breakdown_row;

REIS_API reis_status reis_breakdown(const reis_host_model* m, double dataset_loading_s,
                                    double retrieval_s, reis_breakdown_row rows[6]);

#ifdef __cplusplus
}
#endif

#endif /* REIS_REIS_H_ */
