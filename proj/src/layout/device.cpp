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

#include "layout/device.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "common/error.hpp"

namespace reis::layout {

namespace {

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }
std::uint64_t align_up(std::uint64_t a, std::uint64_t b) { return ceil_div(a, b) * b; }

}  // namespace

std::uint64_t SubRegion::page_of(std::uint64_t index) const {
  REIS_CHECK(index < items, kOutOfRange, "sub-region: item " << index << " of " << items);
  return first_page + (pages_per_item > 1 ? index * pages_per_item : index / slots_per_page);
}

std::uint32_t SubRegion::slot_of(std::uint64_t index) const {
  REIS_CHECK(index < items, kOutOfRange, "sub-region: item " << index << " of " << items);
  return pages_per_item > 1 ? 0 : static_cast<std::uint32_t>(index % slots_per_page);
}

ssd::MiniPageAddress SubRegion::address_of(std::uint64_t index) const {
  return {page_of(index), slot_of(index)};
}

std::uint64_t SubRegion::index_of(const ssd::MiniPageAddress& addr) const {
  REIS_CHECK(contains(addr.page), kOutOfRange,
             "address page " << addr.page << " outside sub-region [" << first_page << ", "
                             << first_page + page_count << ")");
  const std::uint64_t rel = addr.page - first_page;
  std::uint64_t index = 0;
  if (pages_per_item > 1) {
    REIS_CHECK(rel % pages_per_item == 0 && addr.offset == 0, kOutOfRange,
               "address does not start an item");
    index = rel / pages_per_item;
  } else {
    REIS_CHECK(addr.offset < slots_per_page, kOutOfRange,
               "offset " << addr.offset << " beyond " << slots_per_page << " slots");
    index = rel * slots_per_page + addr.offset;
  }
  REIS_CHECK(index < items, kOutOfRange, "address names empty slot " << index);
  return index;
}

std::uint32_t SubRegion::items_on_page(std::uint64_t page) const {
  if (!contains(page)) return 0;
  const std::uint64_t rel = page - first_page;
  if (pages_per_item > 1) return rel % pages_per_item == 0 ? 1 : 0;
  const std::uint64_t before = rel * slots_per_page;
  return before >= items ? 0
                         : static_cast<std::uint32_t>(std::min<std::uint64_t>(
                               slots_per_page, items - before));
}

SubRegion plan_sub_region(const ssd::SsdGeometry& g, std::uint64_t items, std::uint32_t item_bytes,
                          ssd::CellMode mode, std::uint32_t max_slots) {
  REIS_CHECK(item_bytes > 0, kInvalidArgument, "sub-region: zero-sized items");
  SubRegion r;
  r.items = items;
  r.item_bytes = item_bytes;
  r.mode = mode;
  if (item_bytes <= g.page_size) {
    r.slots_per_page = std::min(g.page_size / item_bytes, max_slots);
    r.pages_per_item = 1;
    r.page_count = ceil_div(items, r.slots_per_page);
  } else {
    r.slots_per_page = 1;
    r.pages_per_item = static_cast<std::uint32_t>(ceil_div(item_bytes, g.page_size));
    r.page_count = items * r.pages_per_item;
  }
  return r;
}

DocumentStore DocumentStore::place(ChunkList chunks, const ssd::SsdGeometry& g) {
  const std::uint64_t per_page = g.subpages_per_page();
  DocumentStore s;
  s.dadrs_.reserve(chunks.size());
  std::uint64_t cursor = 0;
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    const std::size_t len = chunks[i].size();
    REIS_CHECK(len <= g.page_size, kInvalidArgument,
               "document " << i << " is " << len << " B, larger than a " << g.page_size
                           << " B page");
    if (len > g.subpage_size) cursor = align_up(cursor, per_page);
    REIS_CHECK(cursor <= std::numeric_limits<std::uint32_t>::max(), kCapacityExceeded,
               "document addresses exceed 32 bits");
    s.dadrs_.push_back(static_cast<std::uint32_t>(cursor));
    cursor += len > g.subpage_size ? per_page : 1;
  }
  s.subpages_used_ = cursor;
  s.chunks_ = std::move(chunks);
  return s;
}

std::uint64_t DocumentStore::page_count(const ssd::SsdGeometry& g) const {
  return ceil_div(subpages_used_, g.subpages_per_page());
}

std::optional<std::size_t> DocumentStore::find(std::uint32_t dadr) const {
  auto it = std::lower_bound(dadrs_.begin(), dadrs_.end(), dadr);
  if (it == dadrs_.end() || *it != dadr) return std::nullopt;
  return static_cast<std::size_t>(it - dadrs_.begin());
}

std::uint64_t DeployedDatabase::occupied_pages() const {
  return centroids.page_count + binary.page_count + int8.page_count + doc_page_count;
}

std::optional<std::uint64_t> next_page_address(std::uint64_t current, const SubRegion& region) {
  REIS_CHECK(region.contains(current), kOutOfRange,
             "page " << current << " is outside the region");
  if (current == region.last_page()) return std::nullopt;
  return current + 1;
}

struct SsdDevice::Plan {
  SubRegion centroids;
  SubRegion binary;
  SubRegion int8;
  std::uint64_t doc_first = 0;
  std::uint64_t doc_pages = 0;
  std::uint64_t end = 0;
};

SsdDevice::SsdDevice(ssd::SsdConfig config) : config_(std::move(config)), flash_(config_.geometry) {
  config_.validate();
}

void SsdDevice::set_timing(const ssd::TimingParams& t) {
  t.validate();
  config_.timing = t;
}

void SsdDevice::set_energy(const ssd::EnergyParams& e) {
  e.validate();
  config_.energy = e;
}

SsdDevice::Plan SsdDevice::plan(std::uint32_t dim, std::uint64_t n, std::uint64_t nlist,
                                std::uint64_t doc_pages, DeployMode mode) const {
  const auto& g = geometry();
  const std::uint32_t emb_bytes = dim / 8;
  REIS_CHECK(emb_bytes <= g.page_size, kInvalidArgument,
             "binary embedding of " << emb_bytes << " B does not fit a page");
  const bool radr = mode == DeployMode::kIvf;
  const std::uint64_t stripe = g.total_planes();
  Plan p;
  std::uint64_t cursor = align_up(cursor_, stripe);
  auto place = [&](SubRegion& r) {
    r.first_page = align_up(cursor, stripe);
    cursor = r.first_page + r.page_count;
  };
  if (mode == DeployMode::kIvf) {
    p.centroids = plan_sub_region(g, nlist, emb_bytes, ssd::CellMode::kSlc,
                                  std::min(ssd::kMaxSlotsPerPage, g.oob_size));
    place(p.centroids);
  }
  const std::uint32_t oob_slots = g.oob_size / oob_record_bytes(radr);
  p.binary = plan_sub_region(g, n, emb_bytes, ssd::CellMode::kSlc,
                             std::min(ssd::kMaxSlotsPerPage, oob_slots));
  REIS_CHECK(oob_link_table_bytes(p.binary.slots_per_page, radr) <= g.oob_size, kCapacityExceeded,
             "link table does not fit the spare area");
  place(p.binary);
  p.int8 = plan_sub_region(g, n, dim, ssd::CellMode::kTlc, std::numeric_limits<std::uint32_t>::max());
  place(p.int8);
  p.doc_first = align_up(cursor, stripe);
  p.doc_pages = doc_pages;
  p.end = p.doc_first + p.doc_pages;
  REIS_CHECK(p.end <= g.total_pages() && p.end - 1 <= ssd::kMaxPageAddress, kCapacityExceeded,
             "deployment needs " << p.end - cursor_ << " pages from page " << cursor_
                                 << " but the device has " << g.total_pages());
  return p;
}

const DeployedDatabase& SsdDevice::deploy_flat(std::uint8_t db_id, const vdb::VectorSet& vectors,
                                               ChunkList documents,
                                               const vdb::QuantizerModel& quantizer,
                                               std::span<const std::uint32_t> doc_of_vector) {
  std::vector<std::uint32_t> order(vectors.size());
  std::iota(order.begin(), order.end(), 0u);
  return commit(db_id, DeployMode::kFlat, vectors, std::move(documents), quantizer, doc_of_vector,
                std::move(order), nullptr);
}

const DeployedDatabase& SsdDevice::deploy_ivf(std::uint8_t db_id, const vdb::VectorSet& vectors,
                                              ChunkList documents, const ivf::IvfIndex& index,
                                              const vdb::QuantizerModel& quantizer,
                                              std::span<const std::uint32_t> doc_of_vector) {
  index.validate();
  REIS_CHECK(index.size() == vectors.size() && index.dim() == vectors.dim(), kDimensionMismatch,
             "IVF index covers " << index.size() << " x D=" << index.dim() << " but "
                                 << vectors.size() << " x D=" << vectors.dim() << " given");
  std::vector<std::uint32_t> order;
  order.reserve(vectors.size());
  for (std::size_t c = 0; c < index.nlist(); ++c) {
    REIS_CHECK(!index.cluster_members[c].empty(), kInvalidArgument,
               "IVF cluster " << c << " is empty");
    order.insert(order.end(), index.cluster_members[c].begin(), index.cluster_members[c].end());
  }
  return commit(db_id, DeployMode::kIvf, vectors, std::move(documents), quantizer, doc_of_vector,
                std::move(order), &index);
}

DeployedDatabase& SsdDevice::commit(std::uint8_t db_id, DeployMode mode,
                                    const vdb::VectorSet& vectors, ChunkList documents,
                                    const vdb::QuantizerModel& quantizer,
                                    std::span<const std::uint32_t> doc_of_vector,
                                    std::vector<std::uint32_t> order,
                                    const ivf::IvfIndex* index) {
  REIS_CHECK(!dbs_.contains(db_id), kInvalidArgument,
             "database " << int{db_id} << " is already deployed");
  const std::size_t n = vectors.size();
  const std::size_t dim = vectors.dim();
  REIS_CHECK(n > 0, kInvalidArgument, "deploy: no vectors");
  REIS_CHECK(n <= std::numeric_limits<std::uint32_t>::max(), kCapacityExceeded,
             "deploy: more than 2^32 vectors");
  REIS_CHECK(dim % 8 == 0, kInvalidArgument, "deploy: D=" << dim << " is not a multiple of 8");
  quantizer.validate();
  REIS_CHECK(quantizer.dim() == dim, kDimensionMismatch,
             "deploy: quantizer D=" << quantizer.dim() << " vs vectors D=" << dim);

  std::vector<std::uint32_t> doc_map;
  if (doc_of_vector.empty()) {
    REIS_CHECK(documents.size() == n, kInvalidArgument,
               "deploy: " << n << " vectors but " << documents.size() << " documents");
    doc_map.resize(n);
    std::iota(doc_map.begin(), doc_map.end(), 0u);
  } else {
    REIS_CHECK(doc_of_vector.size() == n, kInvalidArgument,
               "deploy: document map has " << doc_of_vector.size() << " entries for " << n
                                           << " vectors");
    for (auto d : doc_of_vector) {
      REIS_CHECK(d < documents.size(), kOutOfRange, "deploy: document " << d << " does not exist");
    }
    doc_map.assign(doc_of_vector.begin(), doc_of_vector.end());
  }

  const auto& g = geometry();
  DocumentStore store = DocumentStore::place(std::move(documents), g);
  const std::uint64_t nlist = index != nullptr ? index->nlist() : 0;
  const Plan p = plan(static_cast<std::uint32_t>(dim), n, nlist, store.page_count(g), mode);
  const bool radr = mode == DeployMode::kIvf;
  const std::uint32_t emb_bytes = static_cast<std::uint32_t>(dim / 8);

  DeployedDatabase db;
  db.db_id = db_id;
  db.mode = mode;
  db.dim = static_cast<std::uint32_t>(dim);
  db.size = n;
  db.centroids = p.centroids;
  db.binary = p.binary;
  db.int8 = p.int8;
  db.doc_first_page = p.doc_first;
  db.doc_page_count = p.doc_pages;
  db.quantizer = quantizer;

  if (index != nullptr) {
    ssd::Extent& ce = flash_.program(p.centroids.first_page, p.centroids.page_count,
                                     ssd::CellMode::kSlc);
    std::uint32_t next = 0;
    for (std::uint32_t c = 0; c < nlist; ++c) {
      const std::uint64_t rel = p.centroids.page_of(c) - p.centroids.first_page;
      const std::uint32_t slot = p.centroids.slot_of(c);
      auto data = std::span<std::uint8_t>(ce.data).subspan(
          rel * g.page_size + std::size_t{slot} * emb_bytes, emb_bytes);
      vdb::binarize_into(index->centroids.row(c), quantizer, data);
      write_oob_tag(std::span<std::uint8_t>(ce.oob).subspan(rel * g.oob_size, g.oob_size), slot,
                    index->tags[c]);
      RivfEntry e;
      e.centroid_addr = p.centroids.address_of(c);
      e.first_emb_index = next;
      next += static_cast<std::uint32_t>(index->cluster_members[c].size());
      e.last_emb_index = next - 1;
      e.tag = index->tags[c];
      db.rivf.push_back(e);
    }
  }

  ssd::Extent& be = flash_.program(p.binary.first_page, p.binary.page_count, ssd::CellMode::kSlc);
  ssd::Extent& ie = flash_.program(p.int8.first_page, p.int8.page_count, ssd::CellMode::kTlc);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::uint32_t ds = order[pos];
    const auto row = vectors.row(ds);
    const std::uint64_t rel = p.binary.page_of(pos) - p.binary.first_page;
    const std::uint32_t slot = p.binary.slot_of(pos);
    vdb::binarize_into(row, quantizer,
                       std::span<std::uint8_t>(be.data).subspan(
                           rel * g.page_size + std::size_t{slot} * emb_bytes, emb_bytes));
    OobLinkRecord link;
    link.dadr = store.dadr(doc_map[ds]);
    link.radr = static_cast<std::uint32_t>(pos);
    write_oob_link(std::span<std::uint8_t>(be.oob).subspan(rel * g.oob_size, g.oob_size), slot,
                   link, radr);

    const std::uint64_t irel = p.int8.page_of(pos) - p.int8.first_page;
    const std::size_t at = irel * g.page_size + std::size_t{p.int8.slot_of(pos)} * dim;
    vdb::quantize_int8_into(row, quantizer,
                            std::span<std::int8_t>(reinterpret_cast<std::int8_t*>(ie.data.data()) + at,
                                                   dim));
  }

  db.rdb.db_id = db_id;
  db.rdb.emb_region_first = p.binary.address_of(0);
  db.rdb.emb_region_last = p.binary.address_of(n - 1);
  db.rdb.doc_region_first = {p.doc_first, 0};
  db.rdb.doc_region_last = {p.doc_first + p.doc_pages - 1, 0};
  db.position_to_dataset = std::move(order);
  db.doc_of_vector = std::move(doc_map);
  db.documents = std::move(store);

  cursor_ = p.end;
  return dbs_.emplace(db_id, std::move(db)).first->second;
}

const DeployedDatabase& SsdDevice::database(std::uint8_t db_id) const {
  auto it = dbs_.find(db_id);
  REIS_CHECK(it != dbs_.end(), kNotFound, "database " << int{db_id} << " is not deployed");
  return it->second;
}

std::vector<std::uint8_t> SsdDevice::database_ids() const {
  std::vector<std::uint8_t> ids;
  for (const auto& [id, db] : dbs_) ids.push_back(id);
  return ids;
}

std::vector<RdbEntry> SsdDevice::rdb_table() const {
  std::vector<RdbEntry> out;
  for (const auto& [id, db] : dbs_) out.push_back(db.rdb);
  return out;
}

std::span<const std::uint8_t> SsdDevice::binary_embedding(const DeployedDatabase& db,
                                                          std::uint64_t position) const {
  const auto page = flash_.page_data(db.binary.page_of(position));
  return page.subspan(std::size_t{db.binary.slot_of(position)} * db.binary.item_bytes,
                      db.binary.item_bytes);
}

std::span<const std::uint8_t> SsdDevice::centroid_embedding(const DeployedDatabase& db,
                                                            std::uint32_t cluster) const {
  const auto page = flash_.page_data(db.centroids.page_of(cluster));
  return page.subspan(std::size_t{db.centroids.slot_of(cluster)} * db.centroids.item_bytes,
                      db.centroids.item_bytes);
}

std::span<const std::int8_t> SsdDevice::int8_embedding(const DeployedDatabase& db,
                                                       std::uint64_t radr) const {
  const auto bytes = flash_.data_range(db.int8.page_of(radr), db.int8.pages_per_item)
                         .subspan(std::size_t{db.int8.slot_of(radr)} * db.dim, db.dim);
  return {reinterpret_cast<const std::int8_t*>(bytes.data()), bytes.size()};
}

OobLinkRecord SsdDevice::link(const DeployedDatabase& db, std::uint64_t position) const {
  return read_oob_link(flash_.page_oob(db.binary.page_of(position)), db.binary.slot_of(position),
                       db.stores_radr(), static_cast<std::uint32_t>(position));
}

std::uint8_t SsdDevice::centroid_tag(const DeployedDatabase& db, std::uint32_t cluster) const {
  return read_oob_tag(flash_.page_oob(db.centroids.page_of(cluster)),
                      db.centroids.slot_of(cluster));
}

DocumentLookup SsdDevice::lookup_document(const DeployedDatabase& db, std::uint32_t dadr) const {
  const auto idx = db.documents.find(dadr);
  REIS_CHECK(idx.has_value(), kOutOfRange,
             "document address " << dadr << " does not name a chunk of database "
                                 << int{db.db_id});
  DocumentLookup out;
  out.chunk = db.documents.chunk(*idx);
  out.page = db.doc_first_page + dadr / geometry().subpages_per_page();
  out.plane = flash_.plane_of(out.page);
  out.chunk_index = *idx;
  return out;
}

void SsdDevice::restore(DeployedDatabase db, std::vector<ssd::Extent> extents) {
  REIS_CHECK(!dbs_.contains(db.db_id), kInvalidArgument,
             "database " << int{db.db_id} << " is already deployed");
  const std::uint64_t end = db.doc_first_page + db.doc_page_count;
  const std::uint64_t lowest =
      db.mode == DeployMode::kIvf ? db.centroids.first_page : db.binary.first_page;
  REIS_CHECK(lowest >= cursor_, kInvalidArgument,
             "restored database starts at page " << lowest << ", below the allocation cursor "
                                                 << cursor_);
  for (auto& e : extents) flash_.install(std::move(e));
  cursor_ = std::max(cursor_, end);
  const std::uint8_t id = db.db_id;
  dbs_.emplace(id, std::move(db));
}

}  // namespace reis::layout
