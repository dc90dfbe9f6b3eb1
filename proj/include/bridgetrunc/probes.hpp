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

#ifndef BRIDGETRUNC_PROBES_HPP_
#define BRIDGETRUNC_PROBES_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bridgetrunc/ensembles.hpp"
#include "bridgetrunc/experiment.hpp"
#include "bridgetrunc/grid.hpp"
#include "bridgetrunc/moments.hpp"

namespace bridgetrunc {

enum class ProbeKind {
  kFourthMoment,         // sum_ij w_ij^2 = n * mean_j (sum_i w_ij^2)
  kSixthMoment,          // n sum_ij w_ij^3, estimates n^3 E w^3
  kQuadraticForm,        // X^T V V^T X, V = W - 1/n, X standard Gaussian
  kConditionalVariance,  // Var(S_s S'_t / n)
  kTightnessSixth,       // E calV^6 / r^3 along the diagonal s = t = r
  kConjecture1,
  kConjecture2,
};

const char* probe_name(ProbeKind kind) noexcept;
ProbeKind parse_probe(std::string_view name);
std::size_t default_probe_replicates(ProbeKind kind) noexcept;

inline constexpr std::size_t kSixthMomentMinReplicates = 10000;

struct ProbeConfig {
  ProbeKind kind = ProbeKind::kFourthMoment;
  EnsembleKind ensemble = EnsembleKind::kHaarUnitary;
  std::vector<std::size_t> sizes{100};
  std::optional<std::size_t> replicates;  // default_probe_replicates(kind)
  std::optional<std::uint64_t> seed;
  Point point{0.5, 0.5};
  std::vector<double> sweep{0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
  std::size_t grid_m = 20;
  double z_threshold = 4.0;
  SeMethod se_method = SeMethod::kJackknife;
};

void validate(const ProbeConfig& config);

struct ProbeRow {
  std::size_t n = 0;
  Point p;
  double estimate = 0.0;
  double se = 0.0;
  std::optional<double> target;  // exact finite-n value
  std::optional<double> z;
  std::optional<double> limit;
  std::optional<double> z_limit;
  bool gate_limit = false;
  bool pass = true;
};

struct ConjectureRow {
  std::size_t n = 0;
  std::size_t comparisons = 0;
  double max_abs_z = 0.0;        // against the exact covariance given U
  double max_abs_z_limit = 0.0;  // against the limit kernel
  Estimate fourth_moment;        // standardized, at the first test point
  Verdict verdict = Verdict::kEvidenceOnly;
};

struct ProbeReport {
  ProbeConfig config;  // replicates resolved
  std::string quantity;
  std::vector<ProbeRow> rows;
  std::vector<ConjectureRow> conjecture;
  std::vector<std::string> warnings;
  Verdict verdict = Verdict::kPass;
  std::string note;
};

ProbeReport run_probe(const ProbeConfig& config, std::size_t threads = 1);

}  // namespace bridgetrunc

#endif  // BRIDGETRUNC_PROBES_HPP_
