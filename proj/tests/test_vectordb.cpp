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

#include "doctest.h"
#include "support/oracles.hpp"
#include "vectordb/distance.hpp"
#include "vectordb/quantizer.hpp"

using namespace reis;
using namespace reis::vdb;
using reis::testing::Gen;

namespace {

QuantizerModel two_point_model() {
  VectorSet s(2, {0.0f, 0.0f, 2.0f, 2.0f});
  return train_quantizer(s);
}

}  // namespace

TEST_CASE("mean thresholds and max-deviation scales on two points") {
  const auto q = two_point_model();
  CHECK(q.thresholds == std::vector<float>{1.0f, 1.0f});
  CHECK(q.int8_scales == std::vector<float>{1.0f, 1.0f});
}

TEST_CASE("binarization sets bits above the threshold, MSB first") {
  QuantizerModel q{{0.0f, 0.0f}, {1.0f, 1.0f}};
  const std::vector<float> v{1.0f, -1.0f};
  const auto b = binarize(v, q);
  CHECK(b.dim() == 2);
  CHECK(b.bit(0));
  CHECK_FALSE(b.bit(1));
  CHECK(b.bytes() == std::vector<std::uint8_t>{0x80});
  // A value equal to its threshold is not above it.
  const std::vector<float> at{0.0f, 0.0f};
  CHECK(binarize(at, q).bytes() == std::vector<std::uint8_t>{0x00});
}

TEST_CASE("padding bits stay zero") {
  Gen g(3);
  for (std::size_t dim : {1u, 7u, 9u, 13u, 63u}) {
    QuantizerModel q{std::vector<float>(dim, -100.0f), std::vector<float>(dim, 1.0f)};
    const auto v = g.floats(dim);
    const auto b = binarize(v, q);
    CHECK(popcount_bytes(b.view()) == dim);
  }
}

TEST_CASE("binarize and int8 agree with the naive definitions") {
  Gen g(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto dim = static_cast<std::size_t>(g.range(1, 200));
    const auto sample = g.vectors(20, dim);
    const auto q = train_quantizer(sample);
    for (std::size_t i = 0; i < sample.size(); ++i) {
      CHECK(binarize(sample.row(i), q).bytes() == testing::naive_binarize(sample.row(i), q.thresholds));
      CHECK(quantize_int8(sample.row(i), q).components ==
            testing::naive_int8(sample.row(i), q.thresholds, q.int8_scales));
    }
    // Out-of-sample vectors can exceed the scale and must clamp.
    const auto far = g.floats(dim);
    std::vector<float> big(dim);
    for (std::size_t d = 0; d < dim; ++d) big[d] = far[d] * 1000.0f;
    const auto c = quantize_int8(big, q).components;
    CHECK(c == testing::naive_int8(big, q.thresholds, q.int8_scales));
    for (auto x : c) CHECK(std::abs(int{x}) <= 127);
  }
}

TEST_CASE("constant dimension gets unit scale") {
  VectorSet s(2, {5.0f, 1.0f, 5.0f, 3.0f});
  const auto q = train_quantizer(s);
  CHECK(q.thresholds[0] == 5.0f);
  CHECK(q.int8_scales[0] == 1.0f);
  CHECK(q.int8_scales[1] == 1.0f);
}

TEST_CASE("documented distance examples") {
  const std::vector<std::int8_t> a{127}, b{-127};
  CHECK(int8_squared_l2(Int8View(a), Int8View(b)) == 64516);
  const std::vector<std::int8_t> c{3, 0}, d{0, 4};
  CHECK(int8_squared_l2(Int8View(c), Int8View(d)) == 25);
  const std::vector<std::uint8_t> x{0xFF, 0x00}, y{0x0F, 0x01};
  CHECK(hamming_distance(BitView(x), BitView(y)) == 5);
}

TEST_CASE("int8 distance does not overflow at full width") {
  const std::size_t dim = 4096;
  const std::vector<std::int8_t> a(dim, 127), b(dim, -127);
  CHECK(int8_squared_l2(Int8View(a), Int8View(b)) == std::int64_t{64516} * 4096);
}

TEST_CASE("hamming matches a bit-loop oracle on random pairs") {
  Gen g(2024);
  for (int i = 0; i < 100000; ++i) {
    const auto n = static_cast<std::size_t>(g.range(1, 160));
    const auto a = g.bytes(n);
    const auto b = g.bytes(n);
    REQUIRE(hamming_distance(BitView(a), BitView(b)) == testing::naive_hamming(a, b));
  }
}

TEST_CASE("int8 and fp32 distances match oracles") {
  Gen g(99);
  for (int i = 0; i < 2000; ++i) {
    const auto n = static_cast<std::size_t>(g.range(1, 1100));
    const auto a = g.int8s(n);
    const auto b = g.int8s(n);
    REQUIRE(int8_squared_l2(Int8View(a), Int8View(b)) == testing::naive_int8_l2(a, b));
    const auto fa = g.floats(n);
    const auto fb = g.floats(n);
    const auto want = static_cast<double>(testing::precise_l2(fa, fb));
    REQUIRE(double{fp32_squared_l2(fa, fb)} == doctest::Approx(want).epsilon(1e-4));
  }
}

TEST_CASE("hamming is a metric") {
  Gen g(5);
  for (int i = 0; i < 3000; ++i) {
    const auto n = static_cast<std::size_t>(g.range(1, 64));
    const auto a = g.bytes(n), b = g.bytes(n), c = g.bytes(n);
    const auto ab = hamming_distance(BitView(a), BitView(b));
    CHECK(hamming_distance(BitView(a), BitView(a)) == 0);
    CHECK(ab == hamming_distance(BitView(b), BitView(a)));
    CHECK(hamming_distance(BitView(a), BitView(c)) <=
          ab + hamming_distance(BitView(b), BitView(c)));
  }
}

TEST_CASE("mismatched operands are rejected") {
  const std::vector<std::uint8_t> a{1, 2}, b{1};
  CHECK_THROWS_AS(hamming_distance(BitView(a), BitView(b)), Error);
  const std::vector<std::int8_t> c{1, 2}, d{1};
  CHECK_THROWS_AS(int8_squared_l2(Int8View(c), Int8View(d)), Error);
  const std::vector<float> v{1.0f, 2.0f, 3.0f};
  CHECK_THROWS_AS(binarize(v, two_point_model()), Error);
  CHECK_THROWS_AS(Fp32Vector(std::vector<float>{}), Error);
  CHECK_THROWS_AS(Fp32Vector(std::vector<float>{NAN}), Error);
  CHECK_THROWS_AS(BitVector(9, std::vector<std::uint8_t>{1}), Error);
}

TEST_CASE("quantizer serialization round-trips and rejects damage") {
  Gen g(8);
  const auto q = train_quantizer(g.vectors(30, 37));
  const auto bytes = serialize_quantizer(q);
  CHECK(deserialize_quantizer(bytes) == q);
  auto bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(deserialize_quantizer(bad), Error);
  auto cut = bytes;
  cut.pop_back();
  CHECK_THROWS_AS(deserialize_quantizer(cut), Error);
}

TEST_CASE("a single sample becomes the thresholds") {
  VectorSet s(4, {0.5f, -2.0f, 3.25f, 0.0f});
  const auto q = train_quantizer(s);
  CHECK(q.thresholds == std::vector<float>{0.5f, -2.0f, 3.25f, 0.0f});
  CHECK(q.int8_scales == std::vector<float>(4, 1.0f));
}

TEST_CASE("thresholds of standard normal samples sit near zero") {
  Gen g(16);
  std::vector<float> data(1000 * 16);
  for (auto& x : data) x = g.normal();
  const auto q = train_quantizer(VectorSet(16, std::move(data)));
  for (float t : q.thresholds) CHECK(std::abs(t) < 0.15f);
}

TEST_CASE("int8 codes at the threshold and one scale above it") {
  QuantizerModel q{{1.0f, -2.0f, 0.5f}, {2.0f, 0.25f, 4.0f}};
  CHECK(quantize_int8(std::vector<float>{1.0f, -2.0f, 0.5f}, q).components == std::vector<std::int8_t>{0, 0, 0});
  CHECK(quantize_int8(std::vector<float>{3.0f, -1.75f, 4.5f}, q).components ==
        std::vector<std::int8_t>{127, 127, 127});
  CHECK(quantize_int8(std::vector<float>{-1.0f, -2.25f, -3.5f}, q).components ==
        std::vector<std::int8_t>{-127, -127, -127});
}

TEST_CASE("self distances vanish and complements are maximal") {
  Gen g(99);
  const auto a = g.bytes(128);
  std::vector<std::uint8_t> na(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) na[i] = static_cast<std::uint8_t>(~a[i]);
  CHECK(hamming_distance(BitView(a), BitView(a)) == 0);
  CHECK(hamming_distance(BitView(a), BitView(na)) == 1024);
  const auto c = g.int8s(1024);
  CHECK(int8_squared_l2(Int8View(c), Int8View(c)) == 0);
  const auto f = g.floats(1024);
  CHECK(fp32_squared_l2(f, f) == 0.0f);
  const std::vector<float> x{3.0f, 0.0f}, y{0.0f, 4.0f};
  CHECK(fp32_squared_l2(x, y) == 25.0f);
}

TEST_CASE("a vector binarized twice is at distance zero from itself") {
  Gen g(5);
  const auto sample = g.vectors(64, 96);
  const auto q = train_quantizer(sample);
  for (std::size_t i = 0; i < sample.size(); ++i)
    CHECK(hamming_distance(binarize(sample.row(i), q), binarize(sample.row(i), q)) == 0);
}
