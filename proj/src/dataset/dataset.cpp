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

#include "dataset/dataset.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "common/binary_io.hpp"
#include "common/error.hpp"
#include "json.hpp"

namespace reis::dataset {

static_assert(std::endian::native == std::endian::little, "file formats assume a little-endian host");

namespace {

constexpr std::size_t kRvecHeader = 16;

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id)};
  return std::mt19937_64(seq);
}

void sample_points(std::size_t count, const GeneratorParams& p, const std::vector<float>& centers,
                   const std::vector<float>& bases, std::mt19937_64& rng, vdb::VectorSet& out,
                   std::vector<std::uint32_t>* labels) {
  const std::size_t d = p.dim;
  const std::size_t m = p.latent_dim;
  std::uniform_int_distribution<std::uint32_t> pick(0, p.clusters - 1);
  std::normal_distribution<float> normal(0.0f, 1.0f);
  const auto noise = static_cast<float>(p.noise);
  std::vector<float> z(m);
  out.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint32_t b = pick(rng);
    if (labels != nullptr) labels->push_back(b);
    for (auto& v : z) v = normal(rng);
    const float* c = centers.data() + std::size_t{b} * d;
    const float* a = bases.data() + std::size_t{b} * d * m;
    auto row = out.mutable_row(i);
    for (std::size_t k = 0; k < d; ++k) {
      float acc = c[k];
      const float* ak = a + k * m;
      for (std::size_t j = 0; j < m; ++j) acc += ak[j] * z[j];
      row[k] = acc + noise * normal(rng);
    }
  }
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REIS_CHECK(in.good(), kIo, "cannot open " << path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  REIS_CHECK(out.good(), kIo, "cannot create " << path);
  return out;
}

}  // namespace

void GeneratorParams::validate() const {
  REIS_CHECK(n >= 1, kInvalidArgument, "generate: n must be >= 1");
  REIS_CHECK(dim >= 1, kInvalidArgument, "generate: D must be >= 1");
  REIS_CHECK(clusters >= 1, kInvalidArgument, "generate: need at least one cluster");
  REIS_CHECK(latent_dim >= 1, kInvalidArgument, "generate: latent dimension must be >= 1");
  REIS_CHECK(spread >= 0 && noise >= 0 && std::isfinite(spread) && std::isfinite(noise),
             kInvalidArgument, "generate: spread and noise must be finite and >= 0");
  REIS_CHECK(doc_min_bytes <= doc_max_bytes, kInvalidArgument,
             "generate: document length range [" << doc_min_bytes << ", " << doc_max_bytes
                                                 << "] is empty");
}

std::string synthetic_document(std::uint64_t index, std::uint32_t blob, std::size_t length) {
  static constexpr std::array<const char*, 16> kWords = {
      "flash",  "page",    "plane",   "channel", "vector", "query",  "cluster", "document",
      "binary", "latency", "storage", "memory",  "search", "recall", "index",   "retrieval"};
  std::string s = "chunk " + std::to_string(index) + " topic " + std::to_string(blob) + ":";
  std::size_t w = index % kWords.size();
  while (s.size() < length) {
    s += ' ';
    s += kWords[w];
    w = (w + 1 + blob) % kWords.size();
  }
  s.resize(length);
  return s;
}

SyntheticDataset generate(const GeneratorParams& p) {
  p.validate();
  const std::size_t d = p.dim;
  const std::size_t m = p.latent_dim;
  auto structure = stream(p.seed, 0);
  std::normal_distribution<float> normal(0.0f, 1.0f);
  std::vector<float> centers(std::size_t{p.clusters} * d);
  for (auto& v : centers) v = normal(structure);
  const auto scale = static_cast<float>(p.spread / std::sqrt(static_cast<double>(m)));
  std::vector<float> bases(std::size_t{p.clusters} * d * m);
  for (auto& v : bases) v = normal(structure) * scale;

  SyntheticDataset out;
  out.vectors = vdb::VectorSet(d);
  out.queries = vdb::VectorSet(d);
  out.labels.reserve(p.n);
  auto vec_rng = stream(p.seed, 1);
  sample_points(p.n, p, centers, bases, vec_rng, out.vectors, &out.labels);
  auto query_rng = stream(p.seed, 2);
  sample_points(p.queries, p, centers, bases, query_rng, out.queries, nullptr);

  auto doc_rng = stream(p.seed, 3);
  std::uniform_int_distribution<std::uint32_t> len(p.doc_min_bytes, p.doc_max_bytes);
  out.documents.reserve(p.n, p.n * (std::size_t{p.doc_min_bytes} + p.doc_max_bytes) / 2);
  for (std::uint64_t i = 0; i < p.n; ++i) {
    out.documents.add(synthetic_document(i, out.labels[i], len(doc_rng)));
  }
  return out;
}

std::vector<std::uint8_t> encode_rvec(const vdb::VectorSet& v) {
  std::vector<std::uint8_t> out(kRvecHeader + v.data().size() * sizeof(float));
  ByteWriter w;
  w.magic("RVEC");
  w.u32(static_cast<std::uint32_t>(v.dim()));
  w.u64(v.size());
  std::memcpy(out.data(), w.data().data(), kRvecHeader);
  if (!v.data().empty()) {
    std::memcpy(out.data() + kRvecHeader, v.data().data(), v.data().size() * sizeof(float));
  }
  return out;
}

vdb::VectorSet decode_rvec(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes, "RVEC");
  r.expect_magic("RVEC");
  const std::uint32_t dim = r.u32();
  const std::uint64_t n = r.u64();
  REIS_CHECK(dim > 0, kFormat, "RVEC: zero dimension");
  REIS_CHECK(n > 0, kFormat, "RVEC: zero vectors");
  REIS_CHECK(r.remaining() == n * dim * sizeof(float), kFormat,
             "RVEC: header says " << n << " x " << dim << " but payload is " << r.remaining()
                                  << " bytes");
  std::vector<float> data(n * dim);
  std::memcpy(data.data(), bytes.data() + kRvecHeader, data.size() * sizeof(float));
  for (float f : data) REIS_CHECK(std::isfinite(f), kFormat, "RVEC: non-finite component");
  return vdb::VectorSet(dim, std::move(data));
}

std::pair<std::uint32_t, std::uint64_t> read_rvec_header(const std::string& path) {
  auto in = open_in(path);
  std::array<std::uint8_t, kRvecHeader> h{};
  in.read(reinterpret_cast<char*>(h.data()), h.size());
  REIS_CHECK(in.gcount() == static_cast<std::streamsize>(h.size()), kFormat,
             path << ": truncated RVEC header");
  ByteReader r(h, "RVEC");
  r.expect_magic("RVEC");
  const std::uint32_t dim = r.u32();
  return {dim, r.u64()};
}

void write_rvec(const std::string& path, const vdb::VectorSet& v) {
  auto out = open_out(path);
  const auto bytes = encode_rvec(v);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  REIS_CHECK(out.good(), kIo, "write failed: " << path);
}

vdb::VectorSet read_rvec(const std::string& path) { return decode_rvec(read_file(path)); }

std::vector<std::uint8_t> encode_documents(const layout::ChunkList& docs) {
  ByteWriter w;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto c = docs[i];
    w.u32(static_cast<std::uint32_t>(c.size()));
    w.bytes({reinterpret_cast<const std::uint8_t*>(c.data()), c.size()});
  }
  return w.take();
}

layout::ChunkList decode_documents(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes, "documents");
  layout::ChunkList docs;
  while (!r.done()) {
    const std::uint32_t len = r.u32();
    const auto b = r.bytes(len);
    docs.add({reinterpret_cast<const char*>(b.data()), b.size()});
  }
  return docs;
}

void write_documents(const std::string& path, const layout::ChunkList& docs) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto c = docs[i];
    std::array<char, 4> len{};
    const auto n = static_cast<std::uint32_t>(c.size());
    for (int b = 0; b < 4; ++b) len[b] = static_cast<char>(n >> (8 * b));
    out.write(len.data(), 4);
    out.write(c.data(), static_cast<std::streamsize>(c.size()));
  }
  REIS_CHECK(out.good(), kIo, "write failed: " << path);
}

layout::ChunkList read_documents(const std::string& path) { return decode_documents(read_file(path)); }

std::string manifest_to_json(const Manifest& m) {
  nlohmann::ordered_json j;
  j["name"] = m.name;
  j["dim"] = m.dim;
  j["n_vectors"] = m.n_vectors;
  j["vectors"] = m.vectors_path;
  j["documents"] = m.documents_path;
  if (m.queries_path) j["queries"] = *m.queries_path;
  if (m.ground_truth_path) j["ground_truth"] = *m.ground_truth_path;
  if (m.generator) {
    const auto& g = *m.generator;
    j["generator"] = {{"n", g.n},
                      {"dim", g.dim},
                      {"clusters", g.clusters},
                      {"latent_dim", g.latent_dim},
                      {"spread", g.spread},
                      {"noise", g.noise},
                      {"queries", g.queries},
                      {"seed", g.seed},
                      {"doc_min_bytes", g.doc_min_bytes},
                      {"doc_max_bytes", g.doc_max_bytes}};
  }
  return j.dump(2) + "\n";
}

Manifest manifest_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    Manifest m;
    m.name = j.at("name").get<std::string>();
    m.dim = j.at("dim").get<std::uint32_t>();
    m.n_vectors = j.at("n_vectors").get<std::uint64_t>();
    m.vectors_path = j.at("vectors").get<std::string>();
    m.documents_path = j.at("documents").get<std::string>();
    if (j.contains("queries")) m.queries_path = j["queries"].get<std::string>();
    if (j.contains("ground_truth")) m.ground_truth_path = j["ground_truth"].get<std::string>();
    if (j.contains("generator")) {
      const auto& g = j["generator"];
      GeneratorParams p;
      p.n = g.at("n").get<std::uint64_t>();
      p.dim = g.at("dim").get<std::uint32_t>();
      p.clusters = g.at("clusters").get<std::uint32_t>();
      p.latent_dim = g.at("latent_dim").get<std::uint32_t>();
      p.spread = g.at("spread").get<double>();
      p.noise = g.at("noise").get<double>();
      p.queries = g.at("queries").get<std::uint64_t>();
      p.seed = g.at("seed").get<std::uint64_t>();
      p.doc_min_bytes = g.at("doc_min_bytes").get<std::uint32_t>();
      p.doc_max_bytes = g.at("doc_max_bytes").get<std::uint32_t>();
      m.generator = p;
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    REIS_THROW(kFormat, "manifest: " << e.what());
  }
}

void write_manifest(const std::string& path, const Manifest& m) {
  const std::string s = manifest_to_json(m);
  write_file(path, {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
}

Manifest read_manifest(const std::string& path) {
  const auto bytes = read_file(path);
  return manifest_from_json(std::string(bytes.begin(), bytes.end()));
}

std::string resolve(const std::string& manifest_path, const std::string& relative) {
  const std::filesystem::path rel(relative);
  if (rel.is_absolute()) return relative;
  return (std::filesystem::path(manifest_path).parent_path() / rel).string();
}

void validate_files(const std::string& manifest_path, const Manifest& m,
                    std::uint32_t max_document_bytes) {
  REIS_CHECK(m.n_vectors > 0, kFormat, "manifest: zero vectors");
  const std::string vpath = resolve(manifest_path, m.vectors_path);
  const auto [dim, n] = read_rvec_header(vpath);
  REIS_CHECK(dim == m.dim && n == m.n_vectors, kFormat,
             vpath << ": header " << n << " x " << dim << " disagrees with manifest "
                   << m.n_vectors << " x " << m.dim);
  const auto size = std::filesystem::file_size(vpath);
  REIS_CHECK(size == kRvecHeader + n * dim * sizeof(float), kFormat,
             vpath << ": " << size << " bytes for " << n << " x " << dim);
  const auto docs = read_documents(resolve(manifest_path, m.documents_path));
  REIS_CHECK(docs.size() == m.n_vectors, kFormat,
             "documents: " << docs.size() << " chunks for " << m.n_vectors << " vectors");
  for (std::size_t i = 0; i < docs.size(); ++i) {
    REIS_CHECK(docs[i].size() <= max_document_bytes, kFormat,
               "document " << i << " is " << docs[i].size() << " bytes, above "
                           << max_document_bytes);
  }
  if (m.queries_path) {
    const auto [qd, qn] = read_rvec_header(resolve(manifest_path, *m.queries_path));
    REIS_CHECK(qd == m.dim, kFormat, "queries: D=" << qd << " vs " << m.dim);
    (void)qn;
  }
}

}  // namespace reis::dataset
