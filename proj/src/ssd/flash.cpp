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

#include "ssd/flash.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "common/error.hpp"
#include "vectordb/distance.hpp"

namespace reis::ssd {

FlashArray::FlashArray(SsdGeometry geometry) : geometry_(geometry) { geometry_.validate(); }

Extent& FlashArray::program(std::uint64_t first, std::uint64_t count, CellMode mode) {
  Extent e;
  e.first_page = first;
  e.page_count = count;
  e.mode = mode;
  e.data.assign(count * geometry_.page_size, 0);
  e.oob.assign(count * geometry_.oob_size, 0);
  install(std::move(e));
  return extents_.at(first);
}

void FlashArray::install(Extent e) {
  REIS_CHECK(e.page_count > 0, kInvalidArgument, "flash: empty extent");
  REIS_CHECK(e.first_page + e.page_count <= geometry_.total_pages(), kCapacityExceeded,
             "flash: extent [" << e.first_page << ", " << e.first_page + e.page_count
                               << ") exceeds " << geometry_.total_pages() << " pages");
  REIS_CHECK(e.data.size() == e.page_count * geometry_.page_size &&
                 e.oob.size() == e.page_count * geometry_.oob_size,
             kFormat, "flash: extent buffers do not match geometry");
  auto next = extents_.lower_bound(e.first_page);
  if (next != extents_.end()) {
    REIS_CHECK(next->first >= e.first_page + e.page_count, kInvalidArgument,
               "flash: page " << next->first << " already programmed");
  }
  if (next != extents_.begin()) {
    const auto& prev = std::prev(next)->second;
    REIS_CHECK(prev.first_page + prev.page_count <= e.first_page, kInvalidArgument,
               "flash: page " << e.first_page << " already programmed");
  }
  const auto key = e.first_page;
  extents_.emplace(key, std::move(e));
}

const Extent* FlashArray::find(std::uint64_t page) const {
  auto it = extents_.upper_bound(page);
  if (it == extents_.begin()) return nullptr;
  const Extent& e = std::prev(it)->second;
  return page < e.first_page + e.page_count ? &e : nullptr;
}

const Extent& FlashArray::at(std::uint64_t page) const {
  REIS_CHECK(page < geometry_.total_pages(), kOutOfRange,
             "flash: page " << page << " beyond device (" << geometry_.total_pages() << ")");
  const Extent* e = find(page);
  REIS_CHECK(e != nullptr, kNotFound, "flash: page " << page << " was never programmed");
  return *e;
}

CellMode FlashArray::mode_of(std::uint64_t page) const { return at(page).mode; }

std::span<const std::uint8_t> FlashArray::page_data(std::uint64_t page) const {
  const Extent& e = at(page);
  return std::span<const std::uint8_t>(e.data).subspan(
      (page - e.first_page) * geometry_.page_size, geometry_.page_size);
}

std::span<const std::uint8_t> FlashArray::page_oob(std::uint64_t page) const {
  const Extent& e = at(page);
  return std::span<const std::uint8_t>(e.oob).subspan((page - e.first_page) * geometry_.oob_size,
                                                      geometry_.oob_size);
}

std::span<const std::uint8_t> FlashArray::data_range(std::uint64_t first,
                                                     std::uint64_t count) const {
  const Extent& e = at(first);
  REIS_CHECK(count > 0 && first + count <= e.first_page + e.page_count, kOutOfRange,
             "flash: pages [" << first << ", " << first + count << ") cross an extent boundary");
  return std::span<const std::uint8_t>(e.data).subspan((first - e.first_page) * geometry_.page_size,
                                                       count * geometry_.page_size);
}

std::span<std::uint8_t> FlashArray::mutable_page_data(std::uint64_t page) {
  auto s = page_data(page);
  return {const_cast<std::uint8_t*>(s.data()), s.size()};
}

std::span<std::uint8_t> FlashArray::mutable_page_oob(std::uint64_t page) {
  auto s = page_oob(page);
  return {const_cast<std::uint8_t*>(s.data()), s.size()};
}

std::uint32_t embeddings_per_page(const SsdGeometry& g, std::uint32_t embedding_bytes) {
  REIS_CHECK(embedding_bytes > 0 && embedding_bytes <= g.page_size, kInvalidArgument,
             "embeddings_per_page: embedding of " << embedding_bytes << " B vs page of "
                                                  << g.page_size << " B");
  return g.page_size / embedding_bytes;
}

Nanos read_page(const FlashArray& flash, PlaneBuffer& buf, std::uint32_t plane_id,
                std::uint64_t page, const TimingParams& timing) {
  REIS_CHECK(plane_id < flash.geometry().total_planes(), kOutOfRange,
             "read_page: plane " << plane_id << " does not exist");
  REIS_CHECK(page < flash.geometry().total_pages(), kOutOfRange,
             "read_page: page " << page << " beyond device");
  REIS_CHECK(flash.plane_of(page) == plane_id, kOutOfRange,
             "read_page: page " << page << " belongs to plane " << flash.plane_of(page)
                                << ", not " << plane_id);
  const auto data = flash.page_data(page);
  const auto oob = flash.page_oob(page);
  std::memcpy(buf.sensing.data(), data.data(), data.size());
  std::memcpy(buf.oob.data(), oob.data(), oob.size());
  buf.sensing_valid = true;
  buf.data_valid = false;
  buf.loaded_page = page;
  return us_to_ns(flash.mode_of(page) == CellMode::kSlc ? timing.t_read_page_us
                                                         : timing.t_read_tlc_us);
}

void fill_cache_latch(PlaneBuffer& buf, std::span<const std::uint8_t> query, std::uint32_t copies) {
  REIS_CHECK(!query.empty() && std::size_t{copies} * query.size() <= buf.cache.size(),
             kInvalidArgument,
             "IBC: " << copies << " copies of " << query.size() << " B exceed the cache latch");
  std::fill(buf.cache.begin(), buf.cache.end(), std::uint8_t{0});
  for (std::uint32_t s = 0; s < copies; ++s) {
    std::memcpy(buf.cache.data() + std::size_t{s} * query.size(), query.data(), query.size());
  }
  buf.cache_valid = true;
}

Nanos latch_xor(PlaneBuffer& buf, const TimingParams& timing) {
  REIS_CHECK(buf.sensing_valid && buf.cache_valid, kInvalidArgument,
             "latch_xor: sensing and cache latches must both be loaded");
  const std::size_t n = buf.sensing.size();
  const std::uint8_t* sl = buf.sensing.data();
  const std::uint8_t* cl = buf.cache.data();
  std::uint8_t* dl = buf.data.data();
  for (std::size_t i = 0; i < n; ++i) dl[i] = sl[i] ^ cl[i];
  buf.data_valid = true;
  return us_to_ns(timing.t_latch_xor_us);
}

std::uint32_t count_fail_bits(const PlaneBuffer& buf, std::uint32_t slot,
                              std::uint32_t embedding_bytes) {
  REIS_CHECK(buf.data_valid, kInvalidArgument, "count_fail_bits: data latch is empty");
  const std::size_t begin = std::size_t{slot} * embedding_bytes;
  REIS_CHECK(embedding_bytes > 0 && begin + embedding_bytes <= buf.data.size(), kOutOfRange,
             "count_fail_bits: slot " << slot << " outside the page");
  return static_cast<std::uint32_t>(
      vdb::popcount_bytes(std::span<const std::uint8_t>(buf.data).subspan(begin, embedding_bytes)));
}

Nanos channel_transfer_time(std::uint64_t bytes, double bandwidth_gbps) {
  REIS_CHECK(bandwidth_gbps > 0.0, kInvalidArgument, "channel bandwidth must be positive");
  // 1 GB/s is 1 byte per ns. The bandwidth is pinned to an integer bytes/s value
  // so the division is exact before rounding.
  const auto bytes_per_s = static_cast<unsigned __int128>(std::llround(bandwidth_gbps * 1e9));
  const unsigned __int128 num = static_cast<unsigned __int128>(bytes) * 1'000'000'000u;
  return static_cast<Nanos>((num + bytes_per_s / 2) / bytes_per_s);
}

}  // namespace reis::ssd
