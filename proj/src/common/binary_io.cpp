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

#include "common/binary_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "common/error.hpp"

namespace reis {

void ByteWriter::f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }

float ByteReader::f32() { return std::bit_cast<float>(u32()); }

void ByteReader::need(std::size_t n) {
  REIS_CHECK(n <= remaining(), kFormat,
             what_ << ": truncated (need " << n << " bytes at offset " << pos_
                   << ", " << remaining() << " left)");
}

std::uint64_t ByteReader::get_le(int n) {
  need(static_cast<std::size_t>(n));
  std::uint64_t v = 0;
  for (int i = 0; i < n; ++i) v |= std::uint64_t{data_[pos_ + i]} << (8 * i);
  pos_ += static_cast<std::size_t>(n);
  return v;
}

std::span<const std::uint8_t> ByteReader::bytes(std::size_t n) {
  need(n);
  auto s = data_.subspan(pos_, n);
  pos_ += n;
  return s;
}

void ByteReader::expect_magic(std::string_view m) {
  need(m.size());
  REIS_CHECK(std::memcmp(data_.data() + pos_, m.data(), m.size()) == 0, kFormat,
             what_ << ": bad magic, expected \"" << m << "\"");
  pos_ += m.size();
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  REIS_CHECK(in.good(), kIo, "cannot open " << path);
  const auto size = static_cast<std::size_t>(in.tellg());
  std::vector<std::uint8_t> buf(size);
  in.seekg(0);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(size));
  REIS_CHECK(in.good() || size == 0, kIo, "short read on " << path);
  return buf;
}

void write_file(const std::string& path, std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  REIS_CHECK(out.good(), kIo, "cannot create " << path);
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  REIS_CHECK(out.good(), kIo, "short write on " << path);
}

}  // namespace reis
