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

#include <sstream>
#include <stdexcept>
#include <string>

namespace reis {

/// Error categories. The numeric values are shared with the C API status codes.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kDimensionMismatch = 2,
  kCapacityExceeded = 3,
  kOutOfRange = 4,
  kFormat = 5,
  kIo = 6,
  kNotFound = 7,
  kInternal = 99,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace reis

#define REIS_THROW(code, msg)                                  \
  do {                                                         \
    std::ostringstream reis_oss__;                             \
    reis_oss__ << msg;                                         \
    throw ::reis::Error(::reis::ErrorCode::code, reis_oss__.str()); \
  } while (false)

#define REIS_CHECK(cond, code, msg) \
  do {                              \
    if (!(cond)) {                  \
      REIS_THROW(code, msg);        \
    }                               \
  } while (false)
