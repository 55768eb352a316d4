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

#include "ssd/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "common/error.hpp"

namespace reis::ssd {

Nanos us_to_ns(double us) { return static_cast<Nanos>(std::llround(us * 1000.0)); }

PlaneLocation SsdGeometry::locate(std::uint32_t plane_id) const {
  PlaneLocation loc;
  loc.channel = plane_id % channels;
  loc.die = (plane_id / channels) % dies_per_channel;
  loc.plane = plane_id / (channels * dies_per_channel);
  return loc;
}

void SsdGeometry::validate() const {
  REIS_CHECK(channels >= 1 && dies_per_channel >= 1 && planes_per_die >= 1, kInvalidArgument,
             "geometry: channel/die/plane counts must be >= 1");
  REIS_CHECK(pages_per_block >= 1 && blocks_per_plane >= 1, kInvalidArgument,
             "geometry: block counts must be >= 1");
  REIS_CHECK(page_size >= 1 && subpage_size >= 1 && page_size % subpage_size == 0,
             kInvalidArgument,
             "geometry: page_size " << page_size << " is not a multiple of subpage_size "
                                    << subpage_size);
  REIS_CHECK(oob_size >= 1, kInvalidArgument, "geometry: oob_size must be >= 1");
  REIS_CHECK(total_pages() < (std::uint64_t{1} << 33), kInvalidArgument,
             "geometry: " << total_pages() << " pages do not fit a 33-bit page address");
}

void TimingParams::validate() const {
  const double vals[] = {t_read_page_us,   t_read_tlc_us,         t_latch_xor_us,
                         t_bit_count_us,   channel_bw_gbps,       t_dram_access_ns,
                         core_select_throughput, core_int8_macs_per_us, host_link_bw_gbps};
  for (double v : vals) {
    REIS_CHECK(v > 0.0 && std::isfinite(v), kInvalidArgument,
               "timing: all parameters must be strictly positive (got " << v << ")");
  }
}

void EnergyParams::validate() const {
  const double vals[] = {e_read_page_uj, e_latch_op_uj, e_channel_nj_per_byte, e_core_active_mw,
                         e_dram_nj_per_64b};
  for (double v : vals) {
    REIS_CHECK(v >= 0.0 && std::isfinite(v), kInvalidArgument,
               "energy: parameters must be non-negative (got " << v << ")");
  }
}

void SsdConfig::validate() const {
  geometry.validate();
  timing.validate();
  energy.validate();
}

SsdConfig preset_config(const std::string& name) {
  SsdConfig cfg;
  cfg.preset = name;
  if (name == "reis-ssd1") {
    cfg.geometry.channels = 8;
    cfg.geometry.dies_per_channel = 16;
    cfg.geometry.planes_per_die = 2;
    cfg.timing.channel_bw_gbps = 1.2;
  } else if (name == "reis-ssd2") {
    cfg.geometry.channels = 16;
    cfg.geometry.dies_per_channel = 8;
    cfg.geometry.planes_per_die = 4;
    cfg.timing.channel_bw_gbps = 2.0;
  } else {
    REIS_THROW(kInvalidArgument, "unknown preset '" << name << "'");
  }
  return cfg;
}

std::vector<std::string> preset_names() { return {"reis-ssd1", "reis-ssd2"}; }

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  REIS_CHECK(ec == std::errc() && p == end, kInvalidArgument,
             "config: bad value '" << v << "' for " << key);
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  REIS_THROW(kInvalidArgument, "config: bad boolean '" << v << "' for " << key);
}

std::string fmt(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, p);
}

struct KeyDef {
  const char* name;
  std::function<void(SsdConfig&, const std::string&)> set;
  std::function<std::string(const SsdConfig&)> get;
};

#define REIS_U32_KEY(section, field)                                                 \
  KeyDef{#field,                                                                     \
         [](SsdConfig& c, const std::string& v) {                                    \
           c.section.field = parse_number<std::uint32_t>(#field, v);                 \
         },                                                                          \
         [](const SsdConfig& c) { return std::to_string(c.section.field); }}
#define REIS_F64_KEY(section, field)                                                          \
  KeyDef{#field,                                                                              \
         [](SsdConfig& c, const std::string& v) { c.section.field = parse_number<double>(#field, v); }, \
         [](const SsdConfig& c) { return fmt(c.section.field); }}

const std::vector<KeyDef>& key_table() {
  static const std::vector<KeyDef> table = {
      REIS_U32_KEY(geometry, channels),
      REIS_U32_KEY(geometry, dies_per_channel),
      REIS_U32_KEY(geometry, planes_per_die),
      REIS_U32_KEY(geometry, page_size),
      REIS_U32_KEY(geometry, subpage_size),
      REIS_U32_KEY(geometry, oob_size),
      REIS_U32_KEY(geometry, pages_per_block),
      REIS_U32_KEY(geometry, blocks_per_plane),
      REIS_F64_KEY(timing, t_read_page_us),
      REIS_F64_KEY(timing, t_read_tlc_us),
      REIS_F64_KEY(timing, t_latch_xor_us),
      REIS_F64_KEY(timing, t_bit_count_us),
      REIS_F64_KEY(timing, channel_bw_gbps),
      REIS_F64_KEY(timing, t_dram_access_ns),
      REIS_F64_KEY(timing, core_select_throughput),
      REIS_F64_KEY(timing, core_int8_macs_per_us),
      REIS_F64_KEY(timing, host_link_bw_gbps),
      KeyDef{"overlap_count_with_read",
             [](SsdConfig& c, const std::string& v) {
               c.timing.overlap_count_with_read = parse_bool("overlap_count_with_read", v);
             },
             [](const SsdConfig& c) {
               return std::string(c.timing.overlap_count_with_read ? "true" : "false");
             }},
      REIS_F64_KEY(energy, e_read_page_uj),
      REIS_F64_KEY(energy, e_latch_op_uj),
      REIS_F64_KEY(energy, e_channel_nj_per_byte),
      REIS_F64_KEY(energy, e_core_active_mw),
      REIS_F64_KEY(energy, e_dram_nj_per_64b),
  };
  return table;
}

#undef REIS_U32_KEY
#undef REIS_F64_KEY

}  // namespace

KeyValues parse_key_values(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    REIS_CHECK(eq != std::string::npos, kInvalidArgument,
               "config line " << lineno << ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    REIS_CHECK(!key.empty(), kInvalidArgument, "config line " << lineno << ": empty key");
    kv[key] = value;
  }
  return kv;
}

KeyValues load_key_values(const std::string& path) {
  std::ifstream in(path);
  REIS_CHECK(in.good(), kIo, "cannot open config " << path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_key_values(ss.str());
}

bool is_ssd_key(const std::string& key) {
  if (key == "preset") return true;
  for (const auto& k : key_table()) {
    if (key == k.name) return true;
  }
  return false;
}

SsdConfig ssd_config_from(const KeyValues& kv, const std::string& fallback_preset) {
  auto it = kv.find("preset");
  SsdConfig cfg = preset_config(it != kv.end() ? it->second : fallback_preset);
  for (const auto& k : key_table()) {
    if (auto f = kv.find(k.name); f != kv.end()) k.set(cfg, f->second);
  }
  cfg.validate();
  return cfg;
}

KeyValues to_key_values(const SsdConfig& cfg) {
  KeyValues kv;
  kv["preset"] = cfg.preset;
  for (const auto& k : key_table()) kv[k.name] = k.get(cfg);
  return kv;
}

std::string format_key_values(const KeyValues& kv) {
  std::ostringstream out;
  for (const auto& [k, v] : kv) out << k << " = " << v << "\n";
  return out.str();
}

}  // namespace reis::ssd
