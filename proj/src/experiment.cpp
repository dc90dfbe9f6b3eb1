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

#include "bridgetrunc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

#include "bridgetrunc/environment.hpp"
#include "bridgetrunc/error.hpp"
#include "bridgetrunc/ks.hpp"
#include "bridgetrunc/processes.hpp"
#include "bridgetrunc/targets.hpp"
#include "parallel.hpp"

namespace bridgetrunc {
namespace {

struct StatisticName {
  Statistic value;
  const char* name;
};

constexpr StatisticName kStatisticNames[] = {
    {Statistic::kOneParamDeterministic, "one-param-deterministic"},
    {Statistic::kOneParamAnnealed, "one-param-annealed"},
    {Statistic::kOneParamQuenched, "one-param-quenched"},
    {Statistic::kDetTruncCentered, "det-trunc-centered"},
    {Statistic::kRandTruncAnnealed, "rand-trunc-annealed"},
    {Statistic::kVQuenched, "v-quenched"},
    {Statistic::kSubordinatedW, "subordinated-w"},
    {Statistic::kPermutationAnnealed, "permutation-annealed"},
    {Statistic::kPermutationQuenched, "permutation-quenched"},
    {Statistic::kEmpiricalCopula, "empirical-copula"},
    {Statistic::kDftAnnealed, "dft-annealed"},
    {Statistic::kConjectureProbe1, "conjecture-probe-1"},
    {Statistic::kConjectureProbe2, "conjecture-probe-2"},
    {Statistic::kSubordinationLaw, "subordination-law"},
};

bool haar(EnsembleKind k) {
  return k == EnsembleKind::kHaarUnitary || k == EnsembleKind::kHaarOrthogonal;
}

bool ensemble_allowed(Statistic s, EnsembleKind k) {
  const bool perm = k == EnsembleKind::kPermutation;
  const bool dft = k == EnsembleKind::kDft;
  switch (s) {
    case Statistic::kOneParamDeterministic:
    case Statistic::kOneParamAnnealed:
    case Statistic::kOneParamQuenched:
    case Statistic::kRandTruncAnnealed:
    case Statistic::kVQuenched:
    case Statistic::kConjectureProbe1: return haar(k);
    case Statistic::kDetTruncCentered:
    case Statistic::kSubordinatedW:
    case Statistic::kSubordinationLaw: return haar(k) || perm;
    case Statistic::kPermutationAnnealed:
    case Statistic::kPermutationQuenched:
    case Statistic::kEmpiricalCopula: return perm;
    case Statistic::kDftAnnealed: return dft;
    case Statistic::kConjectureProbe2: return true;
  }
  return false;
}

bool mode_allowed(Statistic s, Mode m) {
  switch (s) {
    case Statistic::kOneParamDeterministic:
    case Statistic::kOneParamAnnealed:
    case Statistic::kDetTruncCentered:
    case Statistic::kRandTruncAnnealed:
    case Statistic::kPermutationAnnealed: return m == Mode::kAnnealed;
    case Statistic::kOneParamQuenched:
    case Statistic::kVQuenched:
    case Statistic::kSubordinatedW:
    case Statistic::kPermutationQuenched:
    case Statistic::kSubordinationLaw: return m == Mode::kQuenchedOmega;
    case Statistic::kEmpiricalCopula:
    case Statistic::kConjectureProbe1:
    case Statistic::kConjectureProbe2: return m == Mode::kQuenchedU;
    case Statistic::kDftAnnealed: return m == Mode::kAnnealed || m == Mode::kQuenchedU;
  }
  return false;
}

bool evidence_only(const ExperimentConfig& c) {
  return c.statistic == Statistic::kConjectureProbe1 ||
         (c.statistic == Statistic::kConjectureProbe2 && haar(c.ensemble.kind));
}

std::string point_text(Point p, bool one) {
  char buf[64];
  if (one) {
    std::snprintf(buf, sizeof buf, "%g", p.s);
  } else {
    std::snprintf(buf, sizeof buf, "%g:%g", p.s, p.t);
  }
  return buf;
}

// Objects held fixed across replicates, and the grid indices of the points.
struct Setup {
  std::optional<Environment> env;
  std::optional<SortedEnvironment> sorted_env;
  std::optional<WeightMatrix> weights;
  std::vector<double> column;
  double sum_sq = 0.0;
  std::vector<std::size_t> ks;
  std::vector<std::size_t> ls;
};

Setup make_setup(const ExperimentConfig& c, const Grid& grid) {
  Setup s;
  const std::uint64_t seed = *c.seed;
  const std::size_t n = c.ensemble.n;
  for (const Point& p : c.points) {
    s.ks.push_back(*grid.index_of(p.s));
    s.ls.push_back(is_one_parameter(c.statistic) ? 0 : *grid.index_of(p.t));
  }
  if (c.mode == Mode::kQuenchedOmega) {
    auto rng = RngStream::derive(seed, StreamTag::kFixed, 0);
    s.env = sample_environment(n, rng);
    s.sorted_env.emplace(*s.env);
  }
  if (c.ensemble.kind == EnsembleKind::kDft) {
    s.weights.emplace(squared_moduli(dft_matrix(n)));
  } else if (c.mode == Mode::kQuenchedU) {
    if (c.fixed_matrix == FixedMatrix::kIdentity) {
      s.weights.emplace(Permutation::identity(n));
    } else {
      auto rng = RngStream::derive(seed, StreamTag::kFixed, n);
      s.weights.emplace(squared_moduli(sample_matrix(c.ensemble, rng)));
    }
  }
  if (s.weights) {
    s.sum_sq = s.weights->sum_of_squares();
    s.column.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.column[i] = (*s.weights)(i, 0);
  }
  return s;
}

Scale two_param_scale(const ExperimentConfig& c) {
  switch (c.statistic) {
    case Statistic::kDetTruncCentered:
    case Statistic::kSubordinatedW:
      return c.ensemble.kind == EnsembleKind::kPermutation ? Scale::kInvRootN : Scale::kOne;
    case Statistic::kVQuenched: return Scale::kOne;
    case Statistic::kPermutationQuenched:
    case Statistic::kRandTruncAnnealed:
    case Statistic::kPermutationAnnealed:
    case Statistic::kDftAnnealed:
    case Statistic::kConjectureProbe2: return Scale::kInvRootN;
    default: return Scale::kOne;
  }
}

WeightMatrix replicate_weights(const ExperimentConfig& c, const Setup& setup, RngStream& rng) {
  if (setup.weights) return *setup.weights;
  return squared_moduli(sample_matrix(c.ensemble, rng), UnitarityCheck::kStochastic);
}

// Values of the configured statistic at the test points for replicate r.
std::vector<double> replicate(const ExperimentConfig& c, const Setup& setup, const Grid& grid,
                              std::size_t r, std::string* label) {
  const std::uint64_t seed = *c.seed;
  const std::size_t n = c.ensemble.n;
  auto matrix_rng = RngStream::derive(seed, StreamTag::kMatrix, r);
  auto env_rng = RngStream::derive(seed, StreamTag::kEnvironment, r);
  std::vector<double> out(c.points.size());

  if (is_one_parameter(c.statistic)) {
    std::vector<double> w = c.statistic == Statistic::kConjectureProbe1
                                ? setup.column
                                : sample_first_column_weights(n, *c.ensemble.beta_prime(),
                                                              matrix_rng);
    const SortedEnvironment env =
        setup.sorted_env ? *setup.sorted_env : SortedEnvironment(sample_environment(n, env_rng));
    auto [det, rand] = one_param_paths(w, env.rows, grid);
    Centering centering = Centering::kAnnealedMean;
    if (c.statistic == Statistic::kOneParamDeterministic) centering = Centering::kDeterministicMean;
    if (c.statistic == Statistic::kOneParamQuenched) centering = Centering::kConditionalMean;
    const GridPath1& raw = c.statistic == Statistic::kOneParamDeterministic ? det : rand;
    const GridPath1 path = centered_scaled(raw, centering, Scale::kRootN, {n, &env});
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = path[setup.ks[j]];
    if (label) *label = path.label();
    return out;
  }

  const CenteringContext none{n, nullptr};
  const Scale scale = two_param_scale(c);
  std::optional<GridPath2> path;
  if (c.statistic == Statistic::kDetTruncCentered) {
    const WeightMatrix w = replicate_weights(c, setup, matrix_rng);
    path = centered_scaled(det_truncation_path(w, grid), Centering::kDeterministicMean, scale, none);
  } else if (c.statistic == Statistic::kEmpiricalCopula) {
    path = empirical_copula_path(sample_environment(n, env_rng), setup.weights->permutation(), grid);
  } else {
    const WeightMatrix w = replicate_weights(c, setup, matrix_rng);
    const SortedEnvironment env =
        setup.sorted_env ? *setup.sorted_env : SortedEnvironment(sample_environment(n, env_rng));
    const CenteringContext ctx{n, &env};
    switch (c.statistic) {
      case Statistic::kVQuenched:
      case Statistic::kPermutationQuenched:
        path = centered_scaled(v_process(w, env, grid), Centering::kNone, scale, ctx);
        break;
      case Statistic::kSubordinatedW:
        path = centered_scaled(subordinated_path(w, env, grid), Centering::kConditionalMean, scale,
                               ctx);
        break;
      default:
        path = centered_scaled(rand_truncation_path(w, env, grid), Centering::kAnnealedMean, scale,
                               ctx);
        break;
    }
  }
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = path->at(setup.ks[j], setup.ls[j]);
  if (label) *label = path->label();
  return out;
}

struct Targets {
  std::optional<Kernel> limit;
  bool gate_limit = true;
  std::string finite;
};

Targets describe_targets(const ExperimentConfig& c) {
  const auto bp = c.ensemble.beta_prime();
  const double inv = bp ? 1.0 / *bp : 1.0;
  Targets t;
  switch (c.statistic) {
    case Statistic::kOneParamDeterministic:
      t.limit = Kernel{KernelKind::kBridgeB0, inv};
      t.finite = "n/(n b'+1) (a^a' - a a'), a = floor(ns)/n";
      break;
    case Statistic::kOneParamAnnealed:
      t.limit = Kernel{KernelKind::kBridgeB0, 1.0 + inv};
      t.finite = "n E[sum w_i^2] (s^s' - s s')";
      break;
    case Statistic::kOneParamQuenched:
      t.limit = Kernel{KernelKind::kBridgeB0, inv};
      t.gate_limit = false;
      t.finite = "n/(n b'+1) (S_{s^s'}/n - S_s S_s'/n^2) given omega";
      break;
    case Statistic::kConjectureProbe1:
      t.limit = Kernel{KernelKind::kBridgeB0, 1.0 + inv};
      t.finite = "n sum_i w_i^2 (s^s' - s s') given U";
      break;
    case Statistic::kDetTruncCentered:
      t.limit = Kernel{KernelKind::kTiedDownWinf, inv};
      t.finite = "exact block covariance at floor indices";
      break;
    case Statistic::kRandTruncAnnealed:
    case Statistic::kDftAnnealed:
      t.limit = Kernel{KernelKind::kCalWinf, 1.0};
      t.finite = "calWinf + (E sum w^2 / n) Winf";
      break;
    case Statistic::kPermutationAnnealed:
    case Statistic::kEmpiricalCopula:
      t.limit = Kernel{KernelKind::kBivariateB00, 1.0};
      t.finite = "B00 (exact at every n)";
      break;
    case Statistic::kConjectureProbe2:
      t.limit = Kernel{c.ensemble.kind == EnsembleKind::kPermutation ? KernelKind::kBivariateB00
                                                                      : KernelKind::kCalWinf,
                       1.0};
      t.finite = "calWinf + (sum w^2 / n) Winf given U";
      break;
    case Statistic::kVQuenched:
    case Statistic::kSubordinatedW:
    case Statistic::kPermutationQuenched:
      t.limit = Kernel{KernelKind::kTiedDownWinf, inv};
      t.gate_limit = false;
      t.finite = "exact block covariance at the counts (S_s, S'_t) given omega";
      break;
    case Statistic::kSubordinationLaw:
      t.gate_limit = false;
      t.finite = "equal means and marginal laws of calT and hatT given omega";
      break;
  }
  return t;
}

double finite_covariance(const ExperimentConfig& c, const Setup& setup, const Grid& grid,
                         std::size_t a, std::size_t b) {
  const std::size_t n = c.ensemble.n;
  const double nn = static_cast<double>(n);
  const Point pa = c.points[a];
  const Point pb = c.points[b];
  const auto bp = c.ensemble.beta_prime();
  const double sq = two_param_scale(c) == Scale::kInvRootN ? 1.0 / nn : 1.0;
  switch (c.statistic) {
    case Statistic::kOneParamDeterministic: {
      const double x = static_cast<double>(grid.floor_index(n, setup.ks[a])) / nn;
      const double y = static_cast<double>(grid.floor_index(n, setup.ks[b])) / nn;
      return dirichlet_block_factor(*bp, n) * (std::min(x, y) - x * y);
    }
    case Statistic::kOneParamAnnealed:
      return nn * nn * dirichlet_marginal_moment(*bp, n, 2) *
             kernel_eval(KernelKind::kBridgeB0, pa, pb);
    case Statistic::kOneParamQuenched: {
      const auto& rows = setup.sorted_env->rows;
      const double x = static_cast<double>(rows.count(pa.s)) / nn;
      const double y = static_cast<double>(rows.count(pb.s)) / nn;
      return dirichlet_block_factor(*bp, n) * (std::min(x, y) - x * y);
    }
    case Statistic::kConjectureProbe1: {
      double s2 = 0.0;
      for (double w : setup.column) s2 += w * w;
      return nn * s2 * kernel_eval(KernelKind::kBridgeB0, pa, pb);
    }
    case Statistic::kDetTruncCentered:
      return sq * block_covariance(entry_moments(c.ensemble.kind, n), n,
                                   grid.floor_index(n, setup.ks[a]),
                                   grid.floor_index(n, setup.ls[a]),
                                   grid.floor_index(n, setup.ks[b]),
                                   grid.floor_index(n, setup.ls[b]));
    case Statistic::kRandTruncAnnealed:
    case Statistic::kDftAnnealed:
    case Statistic::kPermutationAnnealed:
    case Statistic::kEmpiricalCopula:
      return environment_covariance(expected_sum_of_squares(c.ensemble.kind, n), n, pa, pb);
    case Statistic::kConjectureProbe2:
      return environment_covariance(setup.sum_sq, n, pa, pb);
    case Statistic::kVQuenched:
    case Statistic::kSubordinatedW:
    case Statistic::kPermutationQuenched: {
      const auto& env = *setup.sorted_env;
      return sq * block_covariance(entry_moments(c.ensemble.kind, n), n, env.rows.count(pa.s),
                                   env.cols.count(pa.t), env.rows.count(pb.s),
                                   env.cols.count(pb.t));
    }
    case Statistic::kSubordinationLaw: break;
  }
  return 0.0;
}

void finish(ExperimentReport& report) {
  bool pass = true;
  double max_z = 0.0;
  for (const auto& c : report.comparisons) {
    pass = pass && c.pass;
    if (!std::isnan(c.z)) max_z = std::max(max_z, std::abs(c.z));
  }
  for (const auto& k : report.ks) pass = pass && k.pass;
  report.max_abs_z = max_z;
  if (evidence_only(report.config)) {
    report.verdict = Verdict::kEvidenceOnly;
  } else {
    report.verdict = pass ? Verdict::kPass : Verdict::kFail;
  }
}

std::string mode_note(const ExperimentConfig& c) {
  std::string note;
  switch (c.mode) {
    case Mode::kAnnealed: note = "annealed: U and omega resampled in every replicate"; break;
    case Mode::kQuenchedOmega:
      note = "quenched: one environment omega drawn from the seed and held fixed; "
             "limit z-scores are reported but not gated";
      break;
    case Mode::kQuenchedU:
      note = "quenched: one matrix drawn from the seed (or the identity) and held fixed, "
             "omega resampled";
      break;
  }
  if (c.ensemble.kind == EnsembleKind::kDft) note = "deterministic DFT matrix, omega resampled";
  if (evidence_only(c)) note += "; conjecture probe: consistency evidence only";
  return note;
}

ExperimentReport run_subordination_law(const ExperimentConfig& c, const Grid& grid,
                                       std::size_t threads) {
  const std::uint64_t seed = *c.seed;
  const std::size_t n = c.ensemble.n;
  const std::size_t g = grid.size();
  const std::size_t d = c.points.size();
  const std::size_t reps = c.replicates;
  std::vector<std::size_t> cell(d);
  for (std::size_t j = 0; j < d; ++j) {
    cell[j] = *grid.index_of(c.points[j].s) * g + *grid.index_of(c.points[j].t);
  }
  auto env_rng = RngStream::derive(seed, StreamTag::kFixed, 0);
  const SortedEnvironment env(sample_environment(n, env_rng));

  std::vector<double> direct(reps * d), subord(reps * d);
  detail::parallel_for(reps, threads, [&](std::size_t r) {
    auto rng1 = RngStream::derive(seed, StreamTag::kMatrix, r);
    auto rng2 = RngStream::derive(seed, StreamTag::kSecondMatrix, r);
    const WeightMatrix w1 =
        squared_moduli(sample_matrix(c.ensemble, rng1), UnitarityCheck::kStochastic);
    const WeightMatrix w2 =
        squared_moduli(sample_matrix(c.ensemble, rng2), UnitarityCheck::kStochastic);
    const GridPath2 a = rand_truncation_path(w1, env, grid);
    const GridPath2 b = subordinated_path(w2, env, grid);
    for (std::size_t j = 0; j < d; ++j) {
      direct[r * d + j] = a.values()[cell[j]];
      subord[r * d + j] = b.values()[cell[j]];
    }
  });

  ExperimentReport report;
  report.config = c;
  report.statistic_label = "calT vs hatT";
  report.finite_target = describe_targets(c).finite;
  report.note = mode_note(c) + "; calT and hatT use independent matrices";

  std::vector<double> x(reps), y(reps);
  auto gather = [&](std::size_t j) {
    for (std::size_t r = 0; r < reps; ++r) {
      x[r] = direct[r * d + j];
      y[r] = subord[r * d + j];
    }
  };
  for (std::size_t j = 0; j < d; ++j) {
    const Point p = c.points[j];
    gather(j);
    const Estimate mx = sample_mean(x);
    const Estimate my = sample_mean(y);
    Comparison cmp;
    cmp.section = "mean-diff";
    cmp.p = cmp.q = p;
    cmp.emp = mx.value - my.value;
    cmp.se = std::hypot(mx.se, my.se);
    const double scale = std::max(1.0, std::abs(mx.value));
    if (cmp.se <= 1e-9 * scale) {
      // Both sides constant up to rounding.
      cmp.pass = std::abs(cmp.emp) <= 1e-9 * scale;
      cmp.z = 0.0;
      report.degenerate = true;
    } else {
      cmp.z = cmp.emp / cmp.se;
      cmp.pass = std::abs(cmp.z) <= c.z_threshold;
    }
    report.comparisons.push_back(cmp);
    const KsResult ks = ks_two_sample(x, y);
    report.ks.push_back({p, ks.statistic, ks.p_value, ks.p_value > kKsAlpha});
  }
  if (report.degenerate) {
    report.warnings.push_back("constant test points; compared to within 1e-9");
  }
  finish(report);
  return report;
}

}  // namespace

const char* statistic_name(Statistic s) noexcept {
  for (const auto& e : kStatisticNames) {
    if (e.value == s) return e.name;
  }
  return "?";
}

Statistic parse_statistic(std::string_view name) {
  for (const auto& e : kStatisticNames) {
    if (name == e.name) return e.value;
  }
  fail(ErrorCode::kConfig, "unknown statistic '" + std::string(name) + "'");
}

const char* mode_name(Mode m) noexcept {
  switch (m) {
    case Mode::kAnnealed: return "annealed";
    case Mode::kQuenchedOmega: return "quenched-omega";
    case Mode::kQuenchedU: return "quenched-u";
  }
  return "?";
}

Mode parse_mode(std::string_view name) {
  for (auto m : {Mode::kAnnealed, Mode::kQuenchedOmega, Mode::kQuenchedU}) {
    if (name == mode_name(m)) return m;
  }
  fail(ErrorCode::kConfig, "unknown mode '" + std::string(name) + "'");
}

const char* fixed_matrix_name(FixedMatrix f) noexcept {
  return f == FixedMatrix::kIdentity ? "identity" : "sampled";
}

FixedMatrix parse_fixed_matrix(std::string_view name) {
  if (name == "identity") return FixedMatrix::kIdentity;
  if (name == "sampled") return FixedMatrix::kSampled;
  fail(ErrorCode::kConfig, "unknown fixed matrix '" + std::string(name) + "'");
}

const char* verdict_name(Verdict v) noexcept {
  switch (v) {
    case Verdict::kPass: return "pass";
    case Verdict::kFail: return "fail";
    case Verdict::kEvidenceOnly: return "evidence-only";
  }
  return "?";
}

bool is_one_parameter(Statistic s) noexcept {
  return s == Statistic::kOneParamDeterministic || s == Statistic::kOneParamAnnealed ||
         s == Statistic::kOneParamQuenched || s == Statistic::kConjectureProbe1;
}

std::vector<Point> default_points(Statistic s) {
  if (is_one_parameter(s)) return {{0.5, 0.0}, {0.25, 0.0}, {0.75, 0.0}, {0.1, 0.0}, {0.9, 0.0}};
  if (s == Statistic::kSubordinationLaw) return {{0.5, 0.5}, {0.25, 0.75}, {0.75, 0.25}, {0.3, 0.3}};
  return {{0.5, 0.5}, {0.25, 0.75}, {0.75, 0.25}, {0.3, 0.3}, {0.8, 0.6}};
}

void validate(const ExperimentConfig& c) {
  auto config_error = [](const std::string& what) { fail(ErrorCode::kConfig, what); };
  if (!c.seed) config_error("a seed is required");
  if (c.ensemble.n < 2) fail(ErrorCode::kInvalidSize, "n must be at least 2");
  if (c.grid_m < 1) fail(ErrorCode::kInvalidSize, "grid m must be at least 1");
  if (c.replicates < kMinReplicates) {
    config_error("at least " + std::to_string(kMinReplicates) + " replicates are required");
  }
  if (!(c.z_threshold > 0.0)) config_error("z threshold must be positive");
  if (c.se_method == SeMethod::kBatchMeans && (c.batches < 2 || c.replicates / c.batches < 2)) {
    config_error("batch means need at least 2 batches of 2 replicates");
  }
  const std::string stat = statistic_name(c.statistic);
  if (!ensemble_allowed(c.statistic, c.ensemble.kind)) {
    config_error("statistic " + stat + " is not defined for ensemble " +
                 ensemble_name(c.ensemble.kind));
  }
  if (!mode_allowed(c.statistic, c.mode)) {
    config_error("statistic " + stat + " cannot run in mode " + mode_name(c.mode));
  }
  if (c.fixed_matrix == FixedMatrix::kIdentity &&
      (c.mode != Mode::kQuenchedU || c.ensemble.kind != EnsembleKind::kPermutation)) {
    config_error("the identity fixed matrix needs a permutation run in mode quenched-u");
  }
  const Grid grid(c.grid_m);
  const bool one = is_one_parameter(c.statistic);
  const auto points = c.points.empty() ? default_points(c.statistic) : c.points;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point p = points[i];
    const std::string text = point_text(p, one);
    if (!(p.s > 0.0 && p.s < 1.0) || (!one && !(p.t > 0.0 && p.t < 1.0))) {
      config_error("test point " + text + " is not interior");
    }
    if (!grid.index_of(p.s) || (!one && !grid.index_of(p.t))) {
      config_error("test point " + text + " is not on the grid with m = " +
                   std::to_string(c.grid_m));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (point_text(points[j], one) == text) config_error("test point " + text + " is repeated");
    }
  }
}

ExperimentReport run_experiment(const ExperimentConfig& input, std::size_t threads) {
  validate(input);
  ExperimentConfig c = input;
  if (c.points.empty()) c.points = default_points(c.statistic);
  if (is_one_parameter(c.statistic)) {
    for (auto& p : c.points) p.t = 0.0;
  }
  const Grid grid(c.grid_m);
  if (c.statistic == Statistic::kSubordinationLaw) return run_subordination_law(c, grid, threads);

  const Setup setup = make_setup(c, grid);
  const std::size_t d = c.points.size();
  Eigen::MatrixXd samples(static_cast<Eigen::Index>(c.replicates), static_cast<Eigen::Index>(d));
  std::string label;
  detail::parallel_for(c.replicates, threads, [&](std::size_t r) {
    const auto values = replicate(c, setup, grid, r, r == 0 ? &label : nullptr);
    for (std::size_t j = 0; j < d; ++j) {
      samples(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = values[j];
    }
  });

  const EmpiricalMoments mom = empirical_moments(samples, {c.se_method, c.batches});
  const Targets targets = describe_targets(c);

  ExperimentReport report;
  report.config = c;
  report.statistic_label = label;
  report.limit_kernel = targets.limit;
  report.finite_target = targets.finite;
  report.note = mode_note(c);
  report.degenerate = mom.any_degenerate();

  for (std::size_t j = 0; j < d; ++j) {
    Comparison cmp;
    cmp.section = "mean";
    cmp.p = cmp.q = c.points[j];
    cmp.emp = mom.means[j].value;
    cmp.se = mom.means[j].se;
    const ZScore z = z_score(mom.means[j], 0.0, c.z_threshold);
    cmp.z = z.z;
    cmp.pass = z.pass;
    report.comparisons.push_back(cmp);
  }
  for (std::size_t i = 0; i < mom.pairs.size(); ++i) {
    const auto [a, b] = mom.pairs[i];
    Comparison cmp;
    cmp.section = "cov";
    cmp.p = c.points[a];
    cmp.q = c.points[b];
    cmp.emp = mom.covariances[i].value;
    cmp.se = mom.covariances[i].se;
    cmp.target = finite_covariance(c, setup, grid, a, b);
    const ZScore z = z_score(mom.covariances[i], cmp.target, c.z_threshold);
    cmp.z = z.z;
    cmp.pass = z.pass;
    if (targets.limit) {
      cmp.limit = kernel_eval(*targets.limit, cmp.p, cmp.q);
      const ZScore zl = z_score(mom.covariances[i], *cmp.limit, c.z_threshold);
      cmp.z_limit = zl.z;
      cmp.gate_limit = targets.gate_limit;
      if (cmp.gate_limit) cmp.pass = cmp.pass && zl.pass;
    }
    report.comparisons.push_back(cmp);
  }
  std::vector<double> first(c.replicates);
  for (std::size_t r = 0; r < c.replicates; ++r) first[r] = samples(static_cast<Eigen::Index>(r), 0);
  report.fourth_moment = standardized_fourth_moment(first);
  if (report.degenerate) report.warnings.push_back("some estimates have zero standard error");
  finish(report);
  return report;
}

TotalVarianceCheck total_variance_check(const EnsembleSpec& ensemble, Point point,
                                        std::size_t environments, std::size_t per_environment,
                                        std::size_t annealed_replicates, std::uint64_t seed,
                                        double threshold, std::size_t threads) {
  require(environments >= 2 && per_environment >= 3 && annealed_replicates >= 3,
          ErrorCode::kConfig, "total variance check needs more replicates");
  require(point.s >= 0.0 && point.s <= 1.0 && point.t >= 0.0 && point.t <= 1.0,
          ErrorCode::kDomain, "point must lie in [0,1]^2");
  const std::size_t n = ensemble.n;
  auto truncation = [&](const WeightMatrix& w, const Environment& env) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (env.rows[i] > point.s) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (env.cols[j] <= point.t) total += w(i, j);
      }
    }
    return total;
  };
  auto draw = [&](RngStream& rng) {
    return squared_moduli(sample_matrix(ensemble, rng), UnitarityCheck::kStochastic);
  };

  std::vector<double> annealed(annealed_replicates);
  detail::parallel_for(annealed_replicates, threads, [&](std::size_t r) {
    auto mrng = RngStream::derive(seed, StreamTag::kMatrix, r);
    auto erng = RngStream::derive(seed, StreamTag::kEnvironment, r);
    annealed[r] = truncation(draw(mrng), sample_environment(n, erng));
  });
  std::vector<double> conditional(environments * per_environment);
  detail::parallel_for(conditional.size(), threads, [&](std::size_t r) {
    auto erng = RngStream::derive(seed, StreamTag::kFixed, r / per_environment);
    auto mrng = RngStream::derive(seed, StreamTag::kSecondMatrix, r);
    conditional[r] = truncation(draw(mrng), sample_environment(n, erng));
  });

  const Eigen::Map<const Eigen::MatrixXd> a(annealed.data(),
                                            static_cast<Eigen::Index>(annealed.size()), 1);
  const EmpiricalMoments am = empirical_moments(a);
  std::vector<double> vars(environments);
  for (std::size_t e = 0; e < environments; ++e) {
    const Eigen::Map<const Eigen::MatrixXd> block(conditional.data() + e * per_environment,
                                                  static_cast<Eigen::Index>(per_environment), 1);
    vars[e] = empirical_moments(block).covariances[0].value;
  }
  const Estimate mean_var = sample_mean(vars);

  TotalVarianceCheck out;
  out.annealed = am.covariances[0].value;
  out.annealed_se = am.covariances[0].se;
  out.mean_conditional = mean_var.value;
  out.mean_conditional_se = mean_var.se;
  out.variance_of_mean = product_count_variance(n, point.s, point.t);
  const Estimate diff{out.annealed - out.mean_conditional - out.variance_of_mean,
                      std::hypot(out.annealed_se, out.mean_conditional_se), false};
  const ZScore z = z_score(diff, 0.0, threshold);
  out.z = z.z;
  out.pass = z.pass;
  return out;
}

}  // namespace bridgetrunc
