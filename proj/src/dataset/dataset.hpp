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

#include "layout/documents.hpp"
#include "vectordb/vectors.hpp"

namespace reis::dataset {

/// Clustered Gaussian blobs, each spread along its own low-rank subspace:
/// x = center_b + A_b z + noise * e, with center ~ N(0, I),
/// A_b ~ N(0, spread^2 / latent_dim), z ~ N(0, I_latent), e ~ N(0, I).
struct GeneratorParams {
  std::uint64_t n = 1000;
  std::uint32_t dim = 64;
  std::uint32_t clusters = 8;
  std::uint32_t latent_dim = 16;
  double spread = 1.0;
  double noise = 0.1;
  std::uint64_t queries = 100;
  std::uint64_t seed = 0;
  std::uint32_t doc_min_bytes = 256;
  std::uint32_t doc_max_bytes = 1024;

  void validate() const;

  friend bool operator==(const GeneratorParams&, const GeneratorParams&) = default;
};

struct SyntheticDataset {
  vdb::VectorSet vectors;
  vdb::VectorSet queries;
  std::vector<std::uint32_t> labels;  // blob of each vector
  layout::ChunkList documents;
};

SyntheticDataset generate(const GeneratorParams& params);

/// Deterministic text of `length` bytes describing vector `index` of blob `blob`.
std::string synthetic_document(std::uint64_t index, std::uint32_t blob, std::size_t length);

// RVEC: "RVEC", u32 D, u64 n, then n*D little-endian f32.
std::vector<std::uint8_t> encode_rvec(const vdb::VectorSet& v);
vdb::VectorSet decode_rvec(std::span<const std::uint8_t> bytes);
void write_rvec(const std::string& path, const vdb::VectorSet& v);
vdb::VectorSet read_rvec(const std::string& path);
/// Reads only the header; returns {D, n}.
std::pair<std::uint32_t, std::uint64_t> read_rvec_header(const std::string& path);

// Documents: repeated (u32 length, bytes).
std::vector<std::uint8_t> encode_documents(const layout::ChunkList& docs);
layout::ChunkList decode_documents(std::span<const std::uint8_t> bytes);
void write_documents(const std::string& path, const layout::ChunkList& docs);
layout::ChunkList read_documents(const std::string& path);

struct Manifest {
  std::string name;
  std::uint32_t dim = 0;
  std::uint64_t n_vectors = 0;
  std::string vectors_path;    // relative to the manifest directory
  std::string documents_path;
  std::optional<std::string> queries_path;
  std::optional<std::string> ground_truth_path;
  std::optional<GeneratorParams> generator;

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

std::string manifest_to_json(const Manifest& m);
Manifest manifest_from_json(const std::string& text);
void write_manifest(const std::string& path, const Manifest& m);
Manifest read_manifest(const std::string& path);
/// Path of `relative` as seen from the manifest at `manifest_path`.
std::string resolve(const std::string& manifest_path, const std::string& relative);

/// Checks header counts against the manifest and file sizes, and document
/// count and sizes against `max_document_bytes`. Throws kFormat on mismatch.
void validate_files(const std::string& manifest_path, const Manifest& m,
                    std::uint32_t max_document_bytes);

}  // namespace reis::dataset
