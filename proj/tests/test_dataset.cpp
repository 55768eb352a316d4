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


#include <filesystem>

#include "common/binary_io.hpp"
#include "dataset/dataset.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace reis;
using namespace reis::dataset;
namespace fs = std::filesystem;

namespace {

GeneratorParams small() {
  GeneratorParams p;
  p.n = 300;
  p.dim = 32;
  p.clusters = 4;
  p.latent_dim = 4;
  p.queries = 7;
  p.seed = 42;
  p.doc_min_bytes = 20;
  p.doc_max_bytes = 90;
  return p;
}

fs::path scratch(const char* name) {
  const auto d = fs::temp_directory_path() / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("generator is deterministic and seed-sensitive") {
  const auto a = generate(small());
  const auto b = generate(small());
  CHECK(a.vectors.data() == b.vectors.data());
  CHECK(a.queries.data() == b.queries.data());
  CHECK(a.documents == b.documents);
  CHECK(a.labels == b.labels);
  auto p = small();
  p.seed = 43;
  CHECK(generate(p).vectors.data() != a.vectors.data());
  CHECK(a.vectors.size() == 300);
  CHECK(a.queries.size() == 7);
  CHECK(a.documents.size() == 300);
  for (std::size_t i = 0; i < a.documents.size(); ++i) {
    CHECK(a.documents[i].size() >= 20);
    CHECK(a.documents[i].size() <= 90);
  }
}

TEST_CASE("query stream does not disturb the vectors") {
  auto p = small();
  p.queries = 50;
  CHECK(generate(p).vectors.data() == generate(small()).vectors.data());
}

TEST_CASE("synthetic documents have the requested length") {
  for (std::size_t len : {1u, 17u, 4096u, 5000u}) CHECK(synthetic_document(9, 2, len).size() == len);
  CHECK(synthetic_document(9, 2, 100) == synthetic_document(9, 2, 100));
}

TEST_CASE("invalid generator parameters") {
  auto p = small();
  p.n = 0;
  CHECK_THROWS_AS(generate(p), Error);
  p = small();
  p.doc_min_bytes = 100;
  p.doc_max_bytes = 50;
  CHECK_THROWS_AS(generate(p), Error);
  p = small();
  p.clusters = 0;
  CHECK_THROWS_AS(generate(p), Error);
}

TEST_CASE("RVEC round-trip and validation") {
  const auto d = generate(small());
  const auto bytes = encode_rvec(d.vectors);
  CHECK(bytes.size() == 16 + 300 * 32 * 4);
  CHECK(decode_rvec(bytes).data() == d.vectors.data());
  auto cut = bytes;
  cut.pop_back();
  CHECK_THROWS_AS(decode_rvec(cut), Error);
  auto nan = bytes;
  nan[16 + 3] = 0x7F;
  nan[16 + 2] = 0xC0;
  CHECK_THROWS_AS(decode_rvec(nan), Error);
  ByteWriter w;
  w.magic("RVEC");
  w.u32(8);
  w.u64(0);
  CHECK_THROWS_AS(decode_rvec(w.data()), Error);
  const auto dir = scratch("reis_rvec_test");
  write_rvec((dir / "v.rvec").string(), d.vectors);
  CHECK(read_rvec_header((dir / "v.rvec").string()) == std::pair<std::uint32_t, std::uint64_t>{32, 300});
  CHECK(read_rvec((dir / "v.rvec").string()).data() == d.vectors.data());
  fs::remove_all(dir);
}

TEST_CASE("document file round-trip") {
  reis::testing::Gen g(4);
  const auto docs = g.documents(40, 0, 300);
  CHECK(decode_documents(encode_documents(docs)) == docs);
  auto bytes = encode_documents(docs);
  bytes.resize(bytes.size() - 1);
  CHECK_THROWS_AS(decode_documents(bytes), Error);
}

TEST_CASE("manifest round-trip, resolution and validation") {
  const auto d = generate(small());
  const auto dir = scratch("reis_manifest_test");
  Manifest m;
  m.name = "toy";
  m.dim = 32;
  m.n_vectors = 300;
  m.vectors_path = "vectors.rvec";
  m.documents_path = "documents.bin";
  m.queries_path = "queries.rvec";
  m.generator = small();
  CHECK(manifest_from_json(manifest_to_json(m)) == m);
  const auto path = (dir / "manifest.json").string();
  write_manifest(path, m);
  CHECK(read_manifest(path) == m);
  CHECK(resolve(path, "vectors.rvec") == (dir / "vectors.rvec").string());
  CHECK(resolve(path, "/abs/x") == "/abs/x");
  write_rvec(resolve(path, "vectors.rvec"), d.vectors);
  write_documents(resolve(path, "documents.bin"), d.documents);
  write_rvec(resolve(path, "queries.rvec"), d.queries);
  validate_files(path, m, 16384);
  CHECK_THROWS_AS(validate_files(path, m, 50), Error);  // documents over the limit
  auto wrong = m;
  wrong.n_vectors = 301;
  CHECK_THROWS_AS(validate_files(path, wrong, 16384), Error);
  wrong = m;
  wrong.dim = 16;
  CHECK_THROWS_AS(validate_files(path, wrong, 16384), Error);
  CHECK_THROWS_AS(manifest_from_json("{\"name\": 3}"), Error);
  CHECK_THROWS_AS(read_manifest((dir / "missing.json").string()), Error);
  fs::remove_all(dir);
}
