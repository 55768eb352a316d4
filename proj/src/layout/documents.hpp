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
#include <string>
#include <string_view>
#include <vector>

namespace reis::layout {

/// Document chunks packed into one buffer.
class ChunkList {
 public:
  void add(std::string_view chunk) {
    blob_.append(chunk);
    offsets_.push_back(blob_.size());
  }
  void reserve(std::size_t chunks, std::size_t bytes) {
    offsets_.reserve(chunks + 1);
    blob_.reserve(bytes);
  }

  std::size_t size() const { return offsets_.size() - 1; }
  bool empty() const { return size() == 0; }
  std::size_t total_bytes() const { return blob_.size(); }

  std::string_view operator[](std::size_t i) const {
    return std::string_view(blob_).substr(offsets_[i], offsets_[i + 1] - offsets_[i]);
  }

  friend bool operator==(const ChunkList&, const ChunkList&) = default;

 private:
  std::string blob_;
  std::vector<std::uint64_t> offsets_{0};
};

}  // namespace reis::layout
