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

#ifndef BRIDGETRUNC_EXPERIMENT_HPP_
#define BRIDGETRUNC_EXPERIMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bridgetrunc/ensembles.hpp"
#include "bridgetrunc/grid.hpp"
#include "bridgetrunc/limits.hpp"
#include "bridgetrunc/moments.hpp"

namespace bridgetrunc {

enum class Statistic {
  kOneParamDeterministic,  // n^{1/2}(B - floor(ns)/n)
  kOneParamAnnealed,       // n^{1/2}(calB - I), U and omega resampled
  kOneParamQuenched,       // n^{1/2}(calB - S/n), omega fixed
  kDetTruncCentered,       // T - E T (Haar), n^{-1/2}(T - E T) (permutation)
  kRandTruncAnnealed,      // n^{-1/2}(calT - n s t), Haar
  kVQuenched,              // calV, omega fixed
  kSubordinatedW,          // hatT - E[hatT | omega], omega fixed
  kPermutationAnnealed,    // n^{-1/2}(calT - n s t), permutation
  kPermutationQuenched,    // n^{-1/2} calV, permutation, omega fixed
  kEmpiricalCopula,        // calX_n for a fixed permutation
  kDftAnnealed,            // n^{-1/2}(calT - n s t), DFT
  kConjectureProbe1,       // n^{1/2}(calB - I), U fixed
  kConjectureProbe2,       // n^{-1/2}(calT - n s t), U fixed
  kSubordinationLaw,       // calT against hatT in law, omega fixed
};

enum class Mode { kAnnealed, kQuenchedOmega, kQuenchedU };

// Which matrix a QuenchedU run holds fixed.
enum class FixedMatrix { kSampled, kIdentity };

const char* statistic_name(Statistic s) noexcept;
Statistic parse_statistic(std::string_view name);
const char* mode_name(Mode m) noexcept;
Mode parse_mode(std::string_view name);
const char* fixed_matrix_name(FixedMatrix f) noexcept;
FixedMatrix parse_fixed_matrix(std::string_view name);

bool is_one_parameter(Statistic s) noexcept;
std::vector<Point> default_points(Statistic s);

struct ExperimentConfig {
  std::string preset;  // empty for ad hoc runs
  EnsembleSpec ensemble{EnsembleKind::kHaarUnitary, 200};
  Statistic statistic = Statistic::kRandTruncAnnealed;
  Mode mode = Mode::kAnnealed;
  std::size_t grid_m = 20;
  std::size_t replicates = 2000;
  std::optional<std::uint64_t> seed;
  std::vector<Point> points;  // empty selects default_points(statistic)
  double z_threshold = 4.0;
  SeMethod se_method = SeMethod::kJackknife;
  std::size_t batches = 20;
  FixedMatrix fixed_matrix = FixedMatrix::kSampled;
};

inline constexpr std::size_t kMinReplicates = 100;
inline constexpr double kKsAlpha = 0.01;

// Throws a config error describing the first problem found.
void validate(const ExperimentConfig& config);

enum class Verdict { kPass, kFail, kEvidenceOnly };
const char* verdict_name(Verdict v) noexcept;

struct Comparison {
  std::string section;  // "mean", "cov" or "mean-diff"
  Point p;
  Point q;
  double emp = 0.0;
  double se = 0.0;
  double target = 0.0;  // exact finite-n value
  double z = 0.0;
  std::optional<double> limit;  // limit value, when it differs in meaning
  std::optional<double> z_limit;
  bool gate_limit = false;
  bool pass = true;
};

struct KsComparison {
  Point p;
  double statistic = 0.0;
  double p_value = 1.0;
  bool pass = true;
};

struct ExperimentReport {
  ExperimentConfig config;  // points resolved
  std::string statistic_label;
  std::optional<Kernel> limit_kernel;
  std::string finite_target;
  std::vector<Comparison> comparisons;
  std::vector<KsComparison> ks;
  std::optional<Estimate> fourth_moment;  // standardized, at points[0]
  bool degenerate = false;
  std::vector<std::string> warnings;
  double max_abs_z = 0.0;
  Verdict verdict = Verdict::kPass;
  std::string note;
};

ExperimentReport run_experiment(const ExperimentConfig& config, std::size_t threads = 1);

// Law of total variance for calT at one point: the annealed variance against
// the mean conditional variance over fixed environments plus Var(S S'/n).
struct TotalVarianceCheck {
  double annealed = 0.0;
  double annealed_se = 0.0;
  double mean_conditional = 0.0;
  double mean_conditional_se = 0.0;
  double variance_of_mean = 0.0;  // exact
  double z = 0.0;
  bool pass = true;
};

TotalVarianceCheck total_variance_check(const EnsembleSpec& ensemble, Point point,
                                        std::size_t environments, std::size_t per_environment,
                                        std::size_t annealed_replicates, std::uint64_t seed,
                                        double threshold, std::size_t threads = 1);

}  // namespace bridgetrunc

#endif  // BRIDGETRUNC_EXPERIMENT_HPP_
