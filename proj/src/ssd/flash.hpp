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
#include <map>
#include <span>
#include <vector>

#include "ssd/config.hpp"

namespace reis::ssd {

enum class CellMode : std::uint8_t { kSlc = 0, kTlc = 1 };

/// A run of consecutively addressed pages programmed together.
struct Extent {
  std::uint64_t first_page = 0;
  std::uint64_t page_count = 0;
  CellMode mode = CellMode::kSlc;
  std::vector<std::uint8_t> data;  // page_count * page_size
  std::vector<std::uint8_t> oob;   // page_count * oob_size
};

/// Sparse model of the NAND array. Physical page addresses interleave planes:
/// address a lives on plane (a mod P) at in-plane page (a div P), P = total planes,
/// so any contiguous address range is striped round-robin across every plane.
class FlashArray {
 public:
  explicit FlashArray(SsdGeometry geometry);

  const SsdGeometry& geometry() const { return geometry_; }
  std::uint32_t plane_of(std::uint64_t page) const {
    return static_cast<std::uint32_t>(page % geometry_.total_planes());
  }
  std::uint64_t page_in_plane(std::uint64_t page) const {
    return page / geometry_.total_planes();
  }

  /// Reserves and zero-fills [first, first + count). Pages may be programmed once.
  Extent& program(std::uint64_t first, std::uint64_t count, CellMode mode);
  /// Installs a pre-built extent (image loading).
  void install(Extent extent);

  bool is_written(std::uint64_t page) const { return find(page) != nullptr; }
  CellMode mode_of(std::uint64_t page) const;
  std::span<const std::uint8_t> page_data(std::uint64_t page) const;
  std::span<const std::uint8_t> page_oob(std::uint64_t page) const;
  /// Data of pages [first, first + count); they must share one extent.
  std::span<const std::uint8_t> data_range(std::uint64_t first, std::uint64_t count) const;
  std::span<std::uint8_t> mutable_page_data(std::uint64_t page);
  std::span<std::uint8_t> mutable_page_oob(std::uint64_t page);

  const std::map<std::uint64_t, Extent>& extents() const { return extents_; }

 private:
  const Extent* find(std::uint64_t page) const;
  const Extent& at(std::uint64_t page) const;

  SsdGeometry geometry_;
  std::map<std::uint64_t, Extent> extents_;
};

/// Page-buffer latches of one plane.
struct PlaneBuffer {
  explicit PlaneBuffer(const SsdGeometry& g)
      : sensing(g.page_size, 0), cache(g.page_size, 0), data(g.page_size, 0), oob(g.oob_size, 0) {}

  std::vector<std::uint8_t> sensing;  // SL
  std::vector<std::uint8_t> cache;    // CL, holds the broadcast query copies
  std::vector<std::uint8_t> data;     // DL, XOR result
  std::vector<std::uint8_t> oob;      // spare-area latch
  bool sensing_valid = false;
  bool cache_valid = false;
  bool data_valid = false;
  std::uint64_t loaded_page = 0;
};

/// floor(page_size / embedding_bytes).
std::uint32_t embeddings_per_page(const SsdGeometry& g, std::uint32_t embedding_bytes);

/// Senses `page` of `plane_id` into the SL and its spare area into the OOB latch.
/// Returns the sense latency for the page's cell mode.
Nanos read_page(const FlashArray& flash, PlaneBuffer& buf, std::uint32_t plane_id,
                std::uint64_t page, const TimingParams& timing);

/// Writes `copies` aligned copies of `query` into the CL.
void fill_cache_latch(PlaneBuffer& buf, std::span<const std::uint8_t> query, std::uint32_t copies);

/// DL = SL xor CL. Reads SL and CL, writes only DL.
Nanos latch_xor(PlaneBuffer& buf, const TimingParams& timing);

/// popcount of DL bytes [slot * bytes, (slot + 1) * bytes).
std::uint32_t count_fail_bits(const PlaneBuffer& buf, std::uint32_t slot,
                              std::uint32_t embedding_bytes);

/// Pass/fail checker: pass iff value <= threshold.
inline bool pass_fail_compare(std::int64_t value, std::int64_t threshold) {
  return value <= threshold;
}

/// bytes / bandwidth, exact rational arithmetic rounded to the nearest ns.
Nanos channel_transfer_time(std::uint64_t bytes, double bandwidth_gbps);

}  // namespace reis::ssd
