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


#include <cstring>
#include <limits>

#include "common/binary_io.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using reis::ByteReader;
using reis::ByteWriter;

TEST_CASE("byte writer emits little-endian fields") {
  ByteWriter w;
  w.u16(0x0102);
  w.u32(0x03040506);
  w.u40(0x0708090A0Bull);
  const std::vector<std::uint8_t> want{0x02, 0x01, 0x06, 0x05, 0x04, 0x03,
                                       0x0B, 0x0A, 0x09, 0x08, 0x07};
  CHECK(w.data() == want);
}

TEST_CASE("byte reader round-trips random field sequences") {
  reis::testing::Gen g(7);
  for (int trial = 0; trial < 200; ++trial) {
    ByteWriter w;
    std::vector<std::pair<int, std::uint64_t>> fields;
    const auto count = g.range(1, 30);
    for (int i = 0; i < count; ++i) {
      const int kind = static_cast<int>(g.below(5));
      std::uint64_t v = g.u64();
      switch (kind) {
        case 0: v &= 0xFF; w.u8(static_cast<std::uint8_t>(v)); break;
        case 1: v &= 0xFFFF; w.u16(static_cast<std::uint16_t>(v)); break;
        case 2: v &= 0xFFFFFFFF; w.u32(static_cast<std::uint32_t>(v)); break;
        case 3: v &= 0xFFFFFFFFFFull; w.u40(v); break;
        default: w.u64(v); break;
      }
      fields.emplace_back(kind, v);
    }
    const auto bytes = w.take();
    ByteReader r(bytes, "fields");
    for (const auto& [kind, v] : fields) {
      switch (kind) {
        case 0: CHECK(r.u8() == v); break;
        case 1: CHECK(r.u16() == v); break;
        case 2: CHECK(r.u32() == v); break;
        case 3: CHECK(r.u40() == v); break;
        default: CHECK(r.u64() == v); break;
      }
    }
    CHECK(r.done());
  }
}

TEST_CASE("float fields keep their bit pattern") {
  for (float f : {0.0f, -0.0f, 1.5f, -3.25e-7f, std::numeric_limits<float>::max(),
                  std::numeric_limits<float>::denorm_min()}) {
    ByteWriter w;
    w.f32(f);
    const auto bytes = w.take();
    ByteReader r(bytes, "f32");
    const float back = r.f32();
    CHECK(std::memcmp(&back, &f, sizeof f) == 0);
  }
}

TEST_CASE("reader overrun and bad magic raise format errors") {
  const std::vector<std::uint8_t> three{1, 2, 3};
  ByteReader r(three, "short");
  CHECK_THROWS_AS(r.u32(), reis::Error);
  ByteReader m(three, "magic");
  try {
    m.expect_magic("XYZ");
    FAIL("expected throw");
  } catch (const reis::Error& e) {
    CHECK(e.code() == reis::ErrorCode::kFormat);
  }
}
