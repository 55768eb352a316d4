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

#include "layout/records.hpp"

#include <algorithm>

#include "common/binary_io.hpp"
#include "common/error.hpp"

namespace reis::layout {

namespace {

void put_addr(ByteWriter& w, const ssd::MiniPageAddress& a) {
  const auto b = ssd::pack_mini_page(a);
  w.bytes(b);
}

ssd::MiniPageAddress get_addr(ByteReader& r) {
  std::array<std::uint8_t, 5> b{};
  auto s = r.bytes(5);
  std::copy(s.begin(), s.end(), b.begin());
  return ssd::unpack_mini_page(b);
}

template <std::size_t N>
std::array<std::uint8_t, N> to_array(const std::vector<std::uint8_t>& v) {
  REIS_CHECK(v.size() == N, kInternal, "record packed to " << v.size() << " bytes, not " << N);
  std::array<std::uint8_t, N> out{};
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

void put_u32(std::span<std::uint8_t> dst, std::size_t at, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) dst[at + i] = static_cast<std::uint8_t>(v >> (8 * i));
}

std::uint32_t get_u32(std::span<const std::uint8_t> src, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t{src[at + i]} << (8 * i);
  return v;
}

}  // namespace

std::array<std::uint8_t, kRdbEntryBytes> pack_rdb(const RdbEntry& e) {
  ByteWriter w;
  w.u8(e.db_id);
  put_addr(w, e.emb_region_first);
  put_addr(w, e.emb_region_last);
  put_addr(w, e.doc_region_first);
  put_addr(w, e.doc_region_last);
  return to_array<kRdbEntryBytes>(w.data());
}

RdbEntry unpack_rdb(std::span<const std::uint8_t> bytes) {
  REIS_CHECK(bytes.size() == kRdbEntryBytes, kFormat,
             "R-DB entry must be " << kRdbEntryBytes << " bytes, got " << bytes.size());
  ByteReader r(bytes, "R-DB entry");
  RdbEntry e;
  e.db_id = r.u8();
  e.emb_region_first = get_addr(r);
  e.emb_region_last = get_addr(r);
  e.doc_region_first = get_addr(r);
  e.doc_region_last = get_addr(r);
  return e;
}

std::array<std::uint8_t, kRivfEntryBytes> pack_rivf(const RivfEntry& e) {
  ByteWriter w;
  put_addr(w, e.centroid_addr);
  w.u32(e.first_emb_index);
  w.u32(e.last_emb_index);
  w.u8(e.tag);
  w.u8(e.reserved);
  return to_array<kRivfEntryBytes>(w.data());
}

RivfEntry unpack_rivf(std::span<const std::uint8_t> bytes) {
  REIS_CHECK(bytes.size() == kRivfEntryBytes, kFormat,
             "R-IVF entry must be " << kRivfEntryBytes << " bytes, got " << bytes.size());
  ByteReader r(bytes, "R-IVF entry");
  RivfEntry e;
  e.centroid_addr = get_addr(r);
  e.first_emb_index = r.u32();
  e.last_emb_index = r.u32();
  e.tag = r.u8();
  e.reserved = r.u8();
  return e;
}

void write_oob_link(std::span<std::uint8_t> oob, std::uint32_t slot, const OobLinkRecord& rec,
                    bool with_radr) {
  const std::size_t at = std::size_t{slot} * oob_record_bytes(with_radr);
  REIS_CHECK(at + oob_record_bytes(with_radr) <= oob.size(), kCapacityExceeded,
             "OOB link table for slot " << slot << " exceeds the " << oob.size()
                                        << "-byte spare area");
  put_u32(oob, at, rec.dadr);
  if (with_radr) put_u32(oob, at + kDadrBytes, rec.radr);
}

OobLinkRecord read_oob_link(std::span<const std::uint8_t> oob, std::uint32_t slot,
                            bool with_radr, std::uint32_t implicit_radr) {
  const std::size_t at = std::size_t{slot} * oob_record_bytes(with_radr);
  REIS_CHECK(at + oob_record_bytes(with_radr) <= oob.size(), kOutOfRange,
             "OOB link slot " << slot << " outside the spare area");
  OobLinkRecord rec;
  rec.dadr = get_u32(oob, at);
  rec.radr = with_radr ? get_u32(oob, at + kDadrBytes) : implicit_radr;
  return rec;
}

void write_oob_tag(std::span<std::uint8_t> oob, std::uint32_t slot, std::uint8_t tag) {
  REIS_CHECK(slot < oob.size(), kCapacityExceeded, "OOB tag slot " << slot << " out of range");
  oob[slot] = tag;
}

std::uint8_t read_oob_tag(std::span<const std::uint8_t> oob, std::uint32_t slot) {
  REIS_CHECK(slot < oob.size(), kOutOfRange, "OOB tag slot " << slot << " out of range");
  return oob[slot];
}

}  // namespace reis::layout
