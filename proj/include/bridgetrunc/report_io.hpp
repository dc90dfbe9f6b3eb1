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

#ifndef BRIDGETRUNC_REPORT_IO_HPP_
#define BRIDGETRUNC_REPORT_IO_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "bridgetrunc/ensembles.hpp"
#include "bridgetrunc/experiment.hpp"
#include "bridgetrunc/grid.hpp"
#include "bridgetrunc/probes.hpp"

namespace bridgetrunc {

inline constexpr const char* kReportSchema = "bridgetrunc.report/1";
inline constexpr const char* kProbeSchema = "bridgetrunc.probe/1";

// %.17g, round-trip exact for doubles.
std::string format_double(double x);

std::string config_to_json(const ExperimentConfig& config);
// Overwrites the fields named in a JSON object; unknown keys and ill-typed
// values are config errors.
void apply_config_json(ExperimentConfig& config, std::string_view json);

std::string probe_config_to_json(const ProbeConfig& config);
void apply_probe_config_json(ProbeConfig& config, std::string_view json);

// "s:t,s:t,..." for two-parameter points, "s,s,..." for one-parameter ones.
std::vector<Point> parse_points(std::string_view text);

std::string report_to_json(const ExperimentReport& report);
std::string report_to_csv(const ExperimentReport& report);
std::string probe_to_json(const ProbeReport& report);
std::string probe_to_csv(const ProbeReport& report);

// Header i,j,w with 1-based indices. Permutations list only their unit entries.
std::string weights_to_csv(const WeightMatrix& w);
// Header s,t,value (s only for one-parameter paths), row-major over the grid.
std::string path_to_csv(const GridPath2& path);
std::string path_to_csv(const GridPath1& path);

// Throws ErrorCode::kIo naming the path.
void write_text_file(const std::string& path, std::string_view content);

}  // namespace bridgetrunc

#endif  // BRIDGETRUNC_REPORT_IO_HPP_
