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
#include <cstdint>
#include <span>

#include "ssd/mini_page.hpp"

namespace reis::layout {

inline constexpr std::size_t kRdbEntryBytes = 21;
inline constexpr std::size_t kRivfEntryBytes = 15;

/// Coarse-grained address record of one deployed database.
///
/// Layout (little-endian): u8 db_id, then four 5-byte Mini-Page addresses:
/// embedding-region first/last page, document-region first/last page.
struct RdbEntry {
  std::uint8_t db_id = 0;
  ssd::MiniPageAddress emb_region_first;
  ssd::MiniPageAddress emb_region_last;
  ssd::MiniPageAddress doc_region_first;
  ssd::MiniPageAddress doc_region_last;

  friend bool operator==(const RdbEntry&, const RdbEntry&) = default;
};

/// Record of one IVF cluster, kept in SSD DRAM.
///
/// Layout (little-endian): 5-byte centroid Mini-Page address, u32 first and
/// u32 last embedding index (positions in the binary sub-region), u8 tag,
/// u8 reserved (zero).
struct RivfEntry {
  ssd::MiniPageAddress centroid_addr;
  std::uint32_t first_emb_index = 0;
  std::uint32_t last_emb_index = 0;
  std::uint8_t tag = 0;
  std::uint8_t reserved = 0;

  std::uint32_t size() const { return last_emb_index - first_emb_index + 1; }

  friend bool operator==(const RivfEntry&, const RivfEntry&) = default;
};

std::array<std::uint8_t, kRdbEntryBytes> pack_rdb(const RdbEntry& e);
RdbEntry unpack_rdb(std::span<const std::uint8_t> bytes);

std::array<std::uint8_t, kRivfEntryBytes> pack_rivf(const RivfEntry& e);
RivfEntry unpack_rivf(std::span<const std::uint8_t> bytes);

/// Per-embedding link stored in the spare area of the page holding the embedding.
/// Flat databases store only the document address, since the INT8 twin sits at
/// the same index as the binary embedding; IVF databases also store the INT8
/// address explicitly.
struct OobLinkRecord {
  std::uint32_t dadr = 0;  // subpage index relative to the document region
  std::uint32_t radr = 0;  // index in the INT8 sub-region

  friend bool operator==(const OobLinkRecord&, const OobLinkRecord&) = default;
};

inline constexpr std::uint32_t kDadrBytes = 4;
inline constexpr std::uint32_t kRadrBytes = 4;

/// Bytes of link records per embedding slot.
constexpr std::uint32_t oob_record_bytes(bool with_radr) {
  return with_radr ? kDadrBytes + kRadrBytes : kDadrBytes;
}

/// Bytes of spare area used by the link table of one page.
constexpr std::uint32_t oob_link_table_bytes(std::uint32_t slots_per_page, bool with_radr) {
  return slots_per_page * oob_record_bytes(with_radr);
}

void write_oob_link(std::span<std::uint8_t> oob, std::uint32_t slot, const OobLinkRecord& rec,
                    bool with_radr);
/// For flat layouts `implicit_radr` supplies the INT8 index.
OobLinkRecord read_oob_link(std::span<const std::uint8_t> oob, std::uint32_t slot,
                            bool with_radr, std::uint32_t implicit_radr);

/// Centroid pages carry one cluster tag byte per centroid slot.
void write_oob_tag(std::span<std::uint8_t> oob, std::uint32_t slot, std::uint8_t tag);
std::uint8_t read_oob_tag(std::span<const std::uint8_t> oob, std::uint32_t slot);

}  // namespace reis::layout
