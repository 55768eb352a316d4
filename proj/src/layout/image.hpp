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

#include <string>

#include "layout/device.hpp"

namespace reis::layout {

/// Writes every deployed database of `device`, plus its configuration, to the
/// directory `dir` (created if missing).
void save_image(const SsdDevice& device, const std::string& dir);

/// Rebuilds a device from a directory written by save_image.
SsdDevice load_image(const std::string& dir);

/// True when `dir` holds an image.
bool is_image(const std::string& dir);

}  // namespace reis::layout
