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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ivf/ivf_index.hpp"
#include "layout/documents.hpp"
#include "layout/records.hpp"
#include "ssd/flash.hpp"
#include "vectordb/quantizer.hpp"

namespace reis::layout {

enum class DeployMode : std::uint8_t { kFlat = 0, kIvf = 1 };

/// A contiguous page range holding fixed-size items. Items smaller than a page
/// are packed `slots_per_page` to a page; larger items span `pages_per_item`
/// whole pages.
struct SubRegion {
  std::uint64_t first_page = 0;
  std::uint64_t page_count = 0;
  std::uint64_t items = 0;
  std::uint32_t item_bytes = 0;
  std::uint32_t slots_per_page = 0;
  std::uint32_t pages_per_item = 1;
  ssd::CellMode mode = ssd::CellMode::kSlc;

  bool empty() const { return page_count == 0; }
  std::uint64_t last_page() const { return first_page + page_count - 1; }
  bool contains(std::uint64_t page) const {
    return page_count > 0 && page >= first_page && page < first_page + page_count;
  }

  std::uint64_t page_of(std::uint64_t index) const;
  std::uint32_t slot_of(std::uint64_t index) const;
  ssd::MiniPageAddress address_of(std::uint64_t index) const;
  /// Inverse of address_of; throws kOutOfRange for addresses outside the region.
  std::uint64_t index_of(const ssd::MiniPageAddress& addr) const;
  /// Number of items whose first byte sits on `page`.
  std::uint32_t items_on_page(std::uint64_t page) const;

  friend bool operator==(const SubRegion&, const SubRegion&) = default;
};

/// Sizes a sub-region of `items` fixed-size items; first_page is left at 0.
SubRegion plan_sub_region(const ssd::SsdGeometry& g, std::uint64_t items, std::uint32_t item_bytes,
                          ssd::CellMode mode, std::uint32_t max_slots);

/// Document chunks with their subpage addresses. Chunks up to one subpage take
/// one subpage; larger chunks take a whole, page-aligned page.
class DocumentStore {
 public:
  /// Places `chunks` in order, starting at subpage 0.
  static DocumentStore place(ChunkList chunks, const ssd::SsdGeometry& g);

  std::size_t size() const { return chunks_.size(); }
  std::string_view chunk(std::size_t i) const { return chunks_[i]; }
  std::uint32_t dadr(std::size_t i) const { return dadrs_[i]; }
  std::uint64_t subpages_used() const { return subpages_used_; }
  std::uint64_t page_count(const ssd::SsdGeometry& g) const;
  const ChunkList& chunks() const { return chunks_; }

  /// Chunk index stored at `dadr`, if any chunk starts there.
  std::optional<std::size_t> find(std::uint32_t dadr) const;

  friend bool operator==(const DocumentStore&, const DocumentStore&) = default;

 private:
  ChunkList chunks_;
  std::vector<std::uint32_t> dadrs_;
  std::uint64_t subpages_used_ = 0;
};

struct DeployedDatabase {
  std::uint8_t db_id = 0;
  DeployMode mode = DeployMode::kFlat;
  std::uint32_t dim = 0;
  std::uint64_t size = 0;  // embeddings
  SubRegion centroids;     // IVF only
  SubRegion binary;
  SubRegion int8;
  std::uint64_t doc_first_page = 0;
  std::uint64_t doc_page_count = 0;
  RdbEntry rdb;
  std::vector<RivfEntry> rivf;
  vdb::QuantizerModel quantizer;
  std::vector<std::uint32_t> position_to_dataset;  // binary slot index -> dataset index
  std::vector<std::uint32_t> doc_of_vector;        // dataset index -> chunk index
  DocumentStore documents;

  bool stores_radr() const { return mode == DeployMode::kIvf; }
  std::uint32_t nlist() const { return static_cast<std::uint32_t>(rivf.size()); }
  std::uint64_t occupied_pages() const;
  std::uint64_t image_bytes(const ssd::SsdGeometry& g) const {
    return occupied_pages() * g.page_size;
  }
};

struct DocumentLookup {
  std::string_view chunk;
  std::uint64_t page = 0;        // physical page holding the chunk
  std::uint32_t plane = 0;
  std::size_t chunk_index = 0;
};

/// Page after `current`, or nothing once `current` is the region's last page.
std::optional<std::uint64_t> next_page_address(std::uint64_t current, const SubRegion& region);

/// The modeled SSD: flash array, R-DB table, and deployed databases.
class SsdDevice {
 public:
  explicit SsdDevice(ssd::SsdConfig config);

  const ssd::SsdConfig& config() const { return config_; }
  const ssd::SsdGeometry& geometry() const { return config_.geometry; }
  void set_timing(const ssd::TimingParams& t);
  void set_energy(const ssd::EnergyParams& e);
  const ssd::FlashArray& flash() const { return flash_; }

  /// `doc_of_vector` maps each vector to a chunk; empty means one chunk per vector.
  const DeployedDatabase& deploy_flat(std::uint8_t db_id, const vdb::VectorSet& vectors,
                                      ChunkList documents, const vdb::QuantizerModel& quantizer,
                                      std::span<const std::uint32_t> doc_of_vector = {});
  const DeployedDatabase& deploy_ivf(std::uint8_t db_id, const vdb::VectorSet& vectors,
                                     ChunkList documents, const ivf::IvfIndex& index,
                                     const vdb::QuantizerModel& quantizer,
                                     std::span<const std::uint32_t> doc_of_vector = {});

  bool has_database(std::uint8_t db_id) const { return dbs_.contains(db_id); }
  /// Throws kNotFound for unknown ids.
  const DeployedDatabase& database(std::uint8_t db_id) const;
  std::vector<std::uint8_t> database_ids() const;
  std::vector<RdbEntry> rdb_table() const;
  std::uint64_t allocated_pages() const { return cursor_; }

  std::span<const std::uint8_t> binary_embedding(const DeployedDatabase& db,
                                                 std::uint64_t position) const;
  std::span<const std::uint8_t> centroid_embedding(const DeployedDatabase& db,
                                                   std::uint32_t cluster) const;
  std::span<const std::int8_t> int8_embedding(const DeployedDatabase& db, std::uint64_t radr) const;
  OobLinkRecord link(const DeployedDatabase& db, std::uint64_t position) const;
  std::uint8_t centroid_tag(const DeployedDatabase& db, std::uint32_t cluster) const;

  /// Throws kOutOfRange when no chunk starts at `dadr`.
  DocumentLookup lookup_document(const DeployedDatabase& db, std::uint32_t dadr) const;

  /// Re-attaches a database read back from an image.
  void restore(DeployedDatabase db, std::vector<ssd::Extent> extents);

 private:
  struct Plan;
  Plan plan(std::uint32_t dim, std::uint64_t n, std::uint64_t nlist, std::uint64_t doc_pages,
            DeployMode mode) const;
  DeployedDatabase& commit(std::uint8_t db_id, DeployMode mode, const vdb::VectorSet& vectors,
                           ChunkList documents, const vdb::QuantizerModel& quantizer,
                           std::span<const std::uint32_t> doc_of_vector,
                           std::vector<std::uint32_t> order, const ivf::IvfIndex* index);

  ssd::SsdConfig config_;
  ssd::FlashArray flash_;
  std::map<std::uint8_t, DeployedDatabase> dbs_;
  std::uint64_t cursor_ = 0;
};

}  // namespace reis::layout
