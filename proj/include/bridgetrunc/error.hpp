// Copyright 2026 The bridgetrunc Authors.
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

#ifndef BRIDGETRUNC_ERROR_HPP_
#define BRIDGETRUNC_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace bridgetrunc {

// Mirrors bt_status in the C API one-to-one.
enum class ErrorCode {
  kInvalidSize = 2,
  kDomain = 3,
  kContract = 4,
  kConfig = 5,
  kUnknownPreset = 6,
  kNumerical = 7,
  kIo = 8,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool condition, ErrorCode code, const char* what) {
  if (!condition) throw Error(code, what);
}

}  // namespace bridgetrunc

#endif  // BRIDGETRUNC_ERROR_HPP_
