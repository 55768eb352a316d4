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
#include <string>
#include <vector>

namespace reis::ssd {

/// All modeled time is kept in integer nanoseconds so that stage sums are exact.
using Nanos = std::int64_t;
/// All modeled energy is kept in integer picojoules.
using Picojoules = std::int64_t;

Nanos us_to_ns(double us);
inline double ns_to_us(Nanos ns) { return static_cast<double>(ns) / 1000.0; }

struct PlaneLocation {
  std::uint32_t channel = 0;
  std::uint32_t die = 0;    // die index within the channel
  std::uint32_t plane = 0;  // plane index within the die
};

struct SsdGeometry {
  std::uint32_t channels = 8;
  std::uint32_t dies_per_channel = 16;
  std::uint32_t planes_per_die = 2;
  std::uint32_t page_size = 16384;
  std::uint32_t subpage_size = 4096;
  std::uint32_t oob_size = 2208;
  std::uint32_t pages_per_block = 1024;
  std::uint32_t blocks_per_plane = 2048;

  std::uint32_t total_planes() const { return channels * dies_per_channel * planes_per_die; }
  std::uint64_t pages_per_plane() const {
    return std::uint64_t{pages_per_block} * blocks_per_plane;
  }
  std::uint64_t total_pages() const { return pages_per_plane() * total_planes(); }
  std::uint32_t subpages_per_page() const { return page_size / subpage_size; }

  /// Plane ids rotate over channels first, then dies, then planes within a die,
  /// so consecutive plane ids land on different channels.
  PlaneLocation locate(std::uint32_t plane_id) const;

  void validate() const;

  friend bool operator==(const SsdGeometry&, const SsdGeometry&) = default;
};

struct TimingParams {
  double t_read_page_us = 22.5;  // ESP-SLC sense time
  double t_read_tlc_us = 60.0;   // assumption: TLC sense time for INT8 + document regions
  double t_latch_xor_us = 2.0;   // assumption
  double t_bit_count_us = 0.1;   // assumption, per Mini-Page
  double channel_bw_gbps = 1.2;
  double t_dram_access_ns = 50.0;        // assumption, per 64 B
  double core_select_throughput = 10.0;  // assumption, TTL entries per us
  double core_int8_macs_per_us = 2000.0; // assumption, rerank arithmetic rate
  double host_link_bw_gbps = 7.0;        // assumption, PCIe link for document return
  /// Let the fail-bit count of page i overlap the sense of page i+1 when pipelining.
  bool overlap_count_with_read = false;

  void validate() const;

  friend bool operator==(const TimingParams&, const TimingParams&) = default;
};

struct EnergyParams {
  double e_read_page_uj = 2.0;         // assumption
  double e_latch_op_uj = 0.02;         // assumption, per XOR or per fail-bit count
  double e_channel_nj_per_byte = 0.04; // assumption
  double e_core_active_mw = 250.0;     // assumption, one embedded core
  double e_dram_nj_per_64b = 1.5;      // assumption

  void validate() const;

  friend bool operator==(const EnergyParams&, const EnergyParams&) = default;
};

struct SsdConfig {
  std::string preset = "reis-ssd1";
  SsdGeometry geometry;
  TimingParams timing;
  EnergyParams energy;

  void validate() const;
};

SsdConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

/// Flat key/value map parsed from `key = value` lines; '#' starts a comment.
using KeyValues = std::map<std::string, std::string>;
KeyValues parse_key_values(const std::string& text);
KeyValues load_key_values(const std::string& path);

/// Starts from kv["preset"] (or `fallback_preset`) and applies every SSD key in kv.
/// Keys that are not SSD keys are ignored here; see is_ssd_key().
SsdConfig ssd_config_from(const KeyValues& kv, const std::string& fallback_preset = "reis-ssd1");
bool is_ssd_key(const std::string& key);
/// Writes the full configuration back as key/value pairs (round-trips via ssd_config_from).
KeyValues to_key_values(const SsdConfig& cfg);
std::string format_key_values(const KeyValues& kv);

}  // namespace reis::ssd
