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

#ifndef BRIDGETRUNC_PRESETS_HPP_
#define BRIDGETRUNC_PRESETS_HPP_

#include <span>
#include <string_view>

#include "bridgetrunc/experiment.hpp"

namespace bridgetrunc {

struct Preset {
  const char* name;
  const char* target;  // what the preset checks
  ExperimentConfig config;  // no seed; callers must supply one
};

std::span<const Preset> presets();

// Throws ErrorCode::kUnknownPreset.
const Preset& find_preset(std::string_view name);

}  // namespace bridgetrunc

#endif  // BRIDGETRUNC_PRESETS_HPP_
