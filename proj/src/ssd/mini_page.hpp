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

#include <array>
#include <compare>
#include <cstdint>

namespace reis::ssd {

inline constexpr unsigned kPageAddressBits = 33;
inline constexpr unsigned kMiniPageOffsetBits = 7;
/// Embedding slots addressable inside one page.
inline constexpr std::uint32_t kMaxSlotsPerPage = 1u << kMiniPageOffsetBits;
inline constexpr std::uint64_t kMaxPageAddress = (std::uint64_t{1} << kPageAddressBits) - 1;

/// Physical page address extended with an embedding slot. Packs into 40 bits as
/// (page << 7) | offset, so the offset occupies the low 7 bits.
struct MiniPageAddress {
  std::uint64_t page = 0;
  std::uint32_t offset = 0;

  std::uint64_t packed() const { return (page << kMiniPageOffsetBits) | offset; }
  static MiniPageAddress from_packed(std::uint64_t v) {
    return {v >> kMiniPageOffsetBits, static_cast<std::uint32_t>(v & (kMaxSlotsPerPage - 1))};
  }

  friend bool operator==(const MiniPageAddress&, const MiniPageAddress&) = default;
  friend auto operator<=>(const MiniPageAddress& a, const MiniPageAddress& b) {
    return a.packed() <=> b.packed();
  }
};

/// 5-byte little-endian encoding. Throws kOutOfRange when a field overflows.
std::array<std::uint8_t, 5> pack_mini_page(const MiniPageAddress& addr);
MiniPageAddress unpack_mini_page(const std::array<std::uint8_t, 5>& bytes);

}  // namespace reis::ssd
