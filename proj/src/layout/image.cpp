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


#include "layout/image.hpp"

#include <filesystem>
#include <fstream>

#include "common/binary_io.hpp"
#include "common/error.hpp"
#include "dataset/dataset.hpp"
#include "json.hpp"

namespace reis::layout {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kImageVersion = 1;
constexpr const char* kIndexFile = "image.json";

ordered_json region_json(const SubRegion& r) {
  return {{"first_page", r.first_page},         {"page_count", r.page_count},
          {"items", r.items},                   {"item_bytes", r.item_bytes},
          {"slots_per_page", r.slots_per_page}, {"pages_per_item", r.pages_per_item},
          {"mode", r.mode == ssd::CellMode::kSlc ? "slc" : "tlc"}};
}

SubRegion region_from(const nlohmann::json& j) {
  SubRegion r;
  r.first_page = j.at("first_page").get<std::uint64_t>();
  r.page_count = j.at("page_count").get<std::uint64_t>();
  r.items = j.at("items").get<std::uint64_t>();
  r.item_bytes = j.at("item_bytes").get<std::uint32_t>();
  r.slots_per_page = j.at("slots_per_page").get<std::uint32_t>();
  r.pages_per_item = j.at("pages_per_item").get<std::uint32_t>();
  const auto mode = j.at("mode").get<std::string>();
  REIS_CHECK(mode == "slc" || mode == "tlc", kFormat, "image: unknown cell mode " << mode);
  r.mode = mode == "slc" ? ssd::CellMode::kSlc : ssd::CellMode::kTlc;
  return r;
}

std::vector<std::uint8_t> encode_u32s(std::span<const std::uint32_t> v) {
  ByteWriter w;
  w.u64(v.size());
  for (auto x : v) w.u32(x);
  return w.take();
}

std::vector<std::uint32_t> decode_u32s(std::span<const std::uint8_t> bytes, const std::string& what) {
  ByteReader r(bytes, what);
  const std::uint64_t n = r.u64();
  REIS_CHECK(r.remaining() == n * 4, kFormat, what << ": length mismatch");
  std::vector<std::uint32_t> v(n);
  for (auto& x : v) x = r.u32();
  return v;
}

std::uint64_t lowest_page(const DeployedDatabase& db) {
  return db.mode == DeployMode::kIvf ? db.centroids.first_page : db.binary.first_page;
}

void write_flash(const std::string& path, const SsdDevice& device, const DeployedDatabase& db) {
  const std::uint64_t lo = lowest_page(db);
  const std::uint64_t hi = db.doc_first_page + db.doc_page_count;
  std::vector<const ssd::Extent*> mine;
  for (const auto& [first, e] : device.flash().extents()) {
    if (first >= lo && first < hi) mine.push_back(&e);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  REIS_CHECK(out.good(), kIo, "cannot create " << path);
  ByteWriter w;
  w.magic("RFLS");
  w.u32(static_cast<std::uint32_t>(mine.size()));
  out.write(reinterpret_cast<const char*>(w.data().data()), static_cast<std::streamsize>(w.data().size()));
  for (const auto* e : mine) {
    ByteWriter h;
    h.u64(e->first_page);
    h.u64(e->page_count);
    h.u8(static_cast<std::uint8_t>(e->mode));
    out.write(reinterpret_cast<const char*>(h.data().data()), static_cast<std::streamsize>(h.data().size()));
    out.write(reinterpret_cast<const char*>(e->data.data()), static_cast<std::streamsize>(e->data.size()));
    out.write(reinterpret_cast<const char*>(e->oob.data()), static_cast<std::streamsize>(e->oob.size()));
  }
  REIS_CHECK(out.good(), kIo, "write failed: " << path);
}

std::vector<ssd::Extent> read_flash(const std::string& path, const ssd::SsdGeometry& g) {
  const auto bytes = read_file(path);
  ByteReader r(bytes, path);
  r.expect_magic("RFLS");
  const std::uint32_t count = r.u32();
  std::vector<ssd::Extent> out(count);
  for (auto& e : out) {
    e.first_page = r.u64();
    e.page_count = r.u64();
    const std::uint8_t mode = r.u8();
    REIS_CHECK(mode <= 1, kFormat, path << ": bad cell mode " << int{mode});
    e.mode = static_cast<ssd::CellMode>(mode);
    const auto data = r.bytes(e.page_count * g.page_size);
    const auto oob = r.bytes(e.page_count * g.oob_size);
    e.data.assign(data.begin(), data.end());
    e.oob.assign(oob.begin(), oob.end());
  }
  REIS_CHECK(r.done(), kFormat, path << ": trailing bytes");
  return out;
}

std::string db_dir(const fs::path& root, std::uint8_t id) {
  return (root / ("db_" + std::to_string(id))).string();
}

}  // namespace

void save_image(const SsdDevice& device, const std::string& dir) {
  const fs::path root(dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  REIS_CHECK(!ec, kIo, "cannot create " << dir << ": " << ec.message());

  ordered_json j;
  j["version"] = kImageVersion;
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : ssd::to_key_values(device.config())) cfg[k] = v;
  j["config"] = cfg;
  j["databases"] = ordered_json::array();

  for (std::uint8_t id : device.database_ids()) {
    const DeployedDatabase& db = device.database(id);
    const fs::path d = db_dir(root, id);
    fs::create_directories(d, ec);
    REIS_CHECK(!ec, kIo, "cannot create " << d.string() << ": " << ec.message());

    ordered_json e;
    e["db_id"] = id;
    e["mode"] = db.mode == DeployMode::kIvf ? "ivf" : "flat";
    e["dim"] = db.dim;
    e["size"] = db.size;
    e["nlist"] = db.nlist();
    e["centroids"] = region_json(db.centroids);
    e["binary"] = region_json(db.binary);
    e["int8"] = region_json(db.int8);
    e["doc_first_page"] = db.doc_first_page;
    e["doc_page_count"] = db.doc_page_count;
    e["documents"] = db.documents.size();
    j["databases"].push_back(e);

    const auto rdb = pack_rdb(db.rdb);
    write_file((d / "rdb.bin").string(), rdb);
    ByteWriter rivf;
    for (const auto& r : db.rivf) rivf.bytes(pack_rivf(r));
    write_file((d / "rivf.bin").string(), rivf.data());
    write_file((d / "quantizer.rqnt").string(), vdb::serialize_quantizer(db.quantizer));
    write_file((d / "positions.bin").string(), encode_u32s(db.position_to_dataset));
    write_file((d / "doc_map.bin").string(), encode_u32s(db.doc_of_vector));
    dataset::write_documents((d / "documents.bin").string(), db.documents.chunks());
    write_flash((d / "flash.bin").string(), device, db);
  }
  const std::string text = j.dump(2) + "\n";
  write_file((root / kIndexFile).string(),
             {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

bool is_image(const std::string& dir) { return fs::is_regular_file(fs::path(dir) / kIndexFile); }

SsdDevice load_image(const std::string& dir) {
  const fs::path root(dir);
  REIS_CHECK(is_image(dir), kNotFound, dir << " is not a device image");
  const auto raw = read_file((root / kIndexFile).string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(raw.begin(), raw.end());
  } catch (const nlohmann::json::exception& e) {
    REIS_THROW(kFormat, "image: " << e.what());
  }
  try {
    REIS_CHECK(j.at("version").get<int>() == kImageVersion, kFormat,
               "image: unsupported version " << j.at("version").dump());
    ssd::KeyValues kv;
    for (const auto& [k, v] : j.at("config").items()) kv[k] = v.get<std::string>();
    SsdDevice device(ssd::ssd_config_from(kv));
    const auto& g = device.geometry();

    for (const auto& e : j.at("databases")) {
      DeployedDatabase db;
      db.db_id = e.at("db_id").get<std::uint8_t>();
      const auto mode = e.at("mode").get<std::string>();
      REIS_CHECK(mode == "flat" || mode == "ivf", kFormat, "image: unknown mode " << mode);
      db.mode = mode == "ivf" ? DeployMode::kIvf : DeployMode::kFlat;
      db.dim = e.at("dim").get<std::uint32_t>();
      db.size = e.at("size").get<std::uint64_t>();
      db.centroids = region_from(e.at("centroids"));
      db.binary = region_from(e.at("binary"));
      db.int8 = region_from(e.at("int8"));
      db.doc_first_page = e.at("doc_first_page").get<std::uint64_t>();
      db.doc_page_count = e.at("doc_page_count").get<std::uint64_t>();

      const fs::path d = db_dir(root, db.db_id);
      db.rdb = unpack_rdb(read_file((d / "rdb.bin").string()));
      const auto rivf = read_file((d / "rivf.bin").string());
      REIS_CHECK(rivf.size() % kRivfEntryBytes == 0, kFormat, "image: R-IVF size " << rivf.size());
      for (std::size_t off = 0; off < rivf.size(); off += kRivfEntryBytes) {
        db.rivf.push_back(unpack_rivf(std::span(rivf).subspan(off, kRivfEntryBytes)));
      }
      REIS_CHECK(db.nlist() == e.at("nlist").get<std::uint32_t>(), kFormat,
                 "image: R-IVF has " << db.nlist() << " entries");
      db.quantizer = vdb::deserialize_quantizer(read_file((d / "quantizer.rqnt").string()));
      REIS_CHECK(db.quantizer.dim() == db.dim, kFormat, "image: quantizer dimension mismatch");
      db.position_to_dataset = decode_u32s(read_file((d / "positions.bin").string()), "positions");
      db.doc_of_vector = decode_u32s(read_file((d / "doc_map.bin").string()), "doc map");
      REIS_CHECK(db.position_to_dataset.size() == db.size && db.doc_of_vector.size() == db.size,
                 kFormat, "image: position or document map size mismatch");
      db.documents = DocumentStore::place(dataset::read_documents((d / "documents.bin").string()), g);
      REIS_CHECK(db.documents.size() == e.at("documents").get<std::size_t>(), kFormat,
                 "image: document count mismatch");
      for (auto doc : db.doc_of_vector) {
        REIS_CHECK(doc < db.documents.size(), kFormat, "image: document map out of range");
      }
      auto extents = read_flash((d / "flash.bin").string(), g);
      device.restore(std::move(db), std::move(extents));
    }
    return device;
  } catch (const nlohmann::json::exception& e) {
    REIS_THROW(kFormat, "image: " << e.what());
  }
}

}  // namespace reis::layout
