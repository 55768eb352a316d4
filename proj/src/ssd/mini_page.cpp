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

#include "ssd/mini_page.hpp"

#include "common/error.hpp"

namespace reis::ssd {

std::array<std::uint8_t, 5> pack_mini_page(const MiniPageAddress& addr) {
  REIS_CHECK(addr.page <= kMaxPageAddress, kOutOfRange,
             "Mini-Page: page address " << addr.page << " exceeds 33 bits");
  REIS_CHECK(addr.offset < kMaxSlotsPerPage, kOutOfRange,
             "Mini-Page: offset " << addr.offset << " exceeds 7 bits");
  const std::uint64_t v = addr.packed();
  std::array<std::uint8_t, 5> out{};
  for (int i = 0; i < 5; ++i) out[i] = static_cast<std::uint8_t>(v >> (8 * i));
  return out;
}

MiniPageAddress unpack_mini_page(const std::array<std::uint8_t, 5>& bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < 5; ++i) v |= std::uint64_t{bytes[i]} << (8 * i);
  return MiniPageAddress::from_packed(v);
}

}  // namespace reis::ssd
