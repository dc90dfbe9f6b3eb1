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

#include "bridgetrunc/error.hpp"

namespace bridgetrunc {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidSize: return "invalid-size";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kContract: return "contract";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kUnknownPreset: return "unknown-preset";
    case ErrorCode::kNumerical: return "numerical";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace bridgetrunc
