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

#include "bridgetrunc/probes.hpp"

#include <algorithm>
#include <cmath>

#include "bridgetrunc/environment.hpp"
#include "bridgetrunc/error.hpp"
#include "bridgetrunc/processes.hpp"
#include "bridgetrunc/targets.hpp"
#include "parallel.hpp"

namespace bridgetrunc {
namespace {

struct ProbeName {
  ProbeKind kind;
  const char* name;
};

constexpr ProbeName kProbeNames[] = {
    {ProbeKind::kFourthMoment, "fourth-moment"},
    {ProbeKind::kSixthMoment, "sixth-moment"},
    {ProbeKind::kQuadraticForm, "quadratic-form"},
    {ProbeKind::kConditionalVariance, "conditional-variance"},
    {ProbeKind::kTightnessSixth, "tightness-sixth"},
    {ProbeKind::kConjecture1, "conjecture-1"},
    {ProbeKind::kConjecture2, "conjecture-2"},
};

bool matrix_probe(ProbeKind k) {
  return k == ProbeKind::kFourthMoment || k == ProbeKind::kSixthMoment ||
         k == ProbeKind::kQuadraticForm || k == ProbeKind::kTightnessSixth;
}

// Stream index for replicate r at size n; sizes never collide below 2^32.
std::uint64_t stream_index(std::size_t n, std::size_t r) {
  return (static_cast<std::uint64_t>(n) << 32) | static_cast<std::uint64_t>(r);
}

WeightMatrix haar_weights(EnsembleKind kind, std::size_t n, std::uint64_t seed, std::size_t r) {
  auto rng = RngStream::derive(seed, StreamTag::kMatrix, stream_index(n, r));
  return squared_moduli(sample_matrix({kind, n}, rng), UnitarityCheck::kStochastic);
}

void score(ProbeRow& row, const Estimate& e, double threshold) {
  row.estimate = e.value;
  row.se = e.se;
  bool pass = true;
  if (row.target) {
    const ZScore z = z_score(e, *row.target, threshold);
    row.z = z.z;
    pass = z.pass;
  }
  if (row.limit) {
    const ZScore z = z_score(e, *row.limit, threshold);
    row.z_limit = z.z;
    if (row.gate_limit) pass = pass && z.pass;
  }
  row.pass = pass;
}

ProbeRow scalar_probe(const ProbeConfig& c, std::size_t n, std::size_t reps,
                      std::size_t threads) {
  const std::uint64_t seed = *c.seed;
  const double nn = static_cast<double>(n);
  std::vector<double> values(reps);
  ProbeRow row;
  row.n = n;
  row.p = c.point;

  if (c.kind == ProbeKind::kConditionalVariance) {
    detail::parallel_for(reps, threads, [&](std::size_t r) {
      auto rng = RngStream::derive(seed, StreamTag::kEnvironment, stream_index(n, r));
      const Environment env = sample_environment(n, rng);
      values[r] = static_cast<double>(counting(env.rows, c.point.s)) *
                  static_cast<double>(counting(env.cols, c.point.t)) / nn;
    });
    const Eigen::Map<const Eigen::MatrixXd> m(values.data(), static_cast<Eigen::Index>(reps), 1);
    const EmpiricalMoments mom = empirical_moments(m, {c.se_method, 20});
    row.target = product_count_variance(n, c.point.s, c.point.t);
    score(row, mom.covariances[0], c.z_threshold);
    return row;
  }

  const double bp = *EnsembleSpec{c.ensemble, n}.beta_prime();
  detail::parallel_for(reps, threads, [&](std::size_t r) {
    const WeightMatrix w = haar_weights(c.ensemble, n, seed, r);
    const Eigen::MatrixXd& d = w.dense();
    switch (c.kind) {
      case ProbeKind::kFourthMoment: values[r] = d.array().square().sum(); break;
      case ProbeKind::kSixthMoment: values[r] = nn * d.array().cube().sum(); break;
      default: {
        auto xrng = RngStream::derive(seed, StreamTag::kAuxiliary, stream_index(n, r));
        Eigen::VectorXd x(static_cast<Eigen::Index>(n));
        for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = xrng.normal();
        const Eigen::MatrixXd v = d.array() - 1.0 / nn;
        values[r] = (v.transpose() * x).squaredNorm();
        break;
      }
    }
  });
  const Estimate e = sample_mean(values);
  const double m2 = dirichlet_marginal_moment(bp, n, 2);
  switch (c.kind) {
    case ProbeKind::kFourthMoment:
      row.target = nn * nn * m2;
      row.limit = 1.0 + 1.0 / bp;
      break;
    case ProbeKind::kSixthMoment:
      row.target = nn * nn * nn * dirichlet_marginal_moment(bp, n, 3);
      break;
    default:
      row.target = nn * nn * m2 - 1.0;
      row.limit = 1.0 / bp;
      row.gate_limit = true;
      break;
  }
  score(row, e, c.z_threshold);
  return row;
}

std::vector<ProbeRow> tightness_probe(const ProbeConfig& c, std::size_t n, std::size_t reps,
                                      std::size_t threads) {
  const std::uint64_t seed = *c.seed;
  const Grid grid(c.grid_m);
  const std::size_t k = c.sweep.size();
  std::vector<std::size_t> idx;
  for (double r : c.sweep) idx.push_back(*grid.index_of(r));
  std::vector<double> sixth(reps * k);
  detail::parallel_for(reps, threads, [&](std::size_t r) {
    const WeightMatrix w = haar_weights(c.ensemble, n, seed, r);
    auto erng = RngStream::derive(seed, StreamTag::kEnvironment, stream_index(n, r));
    const SortedEnvironment env(sample_environment(n, erng));
    const GridPath2 v = v_process(w, env, grid);
    for (std::size_t j = 0; j < k; ++j) sixth[j * reps + r] = std::pow(v.at(idx[j], idx[j]), 6);
  });
  std::vector<ProbeRow> rows(k);
  std::size_t widest = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const double r3 = std::pow(c.sweep[j], 3);
    const Estimate e = sample_mean(std::span<const double>(sixth).subspan(j * reps, reps));
    rows[j].n = n;
    rows[j].p = {c.sweep[j], c.sweep[j]};
    rows[j].estimate = e.value / r3;
    rows[j].se = e.se / r3;
    if (c.sweep[j] > c.sweep[widest]) widest = j;
  }
  // Bounded check: no ratio exceeds the one at the widest point.
  for (auto& row : rows) {
    const double slack = c.z_threshold * std::hypot(row.se, rows[widest].se);
    row.pass = row.estimate <= rows[widest].estimate + slack;
  }
  return rows;
}

}  // namespace

const char* probe_name(ProbeKind kind) noexcept {
  for (const auto& e : kProbeNames) {
    if (e.kind == kind) return e.name;
  }
  return "?";
}

ProbeKind parse_probe(std::string_view name) {
  for (const auto& e : kProbeNames) {
    if (name == e.name) return e.kind;
  }
  fail(ErrorCode::kConfig, "unknown probe '" + std::string(name) + "'");
}

std::size_t default_probe_replicates(ProbeKind kind) noexcept {
  switch (kind) {
    case ProbeKind::kQuadraticForm:
    case ProbeKind::kConjecture1:
    case ProbeKind::kConjecture2: return 2000;
    default: return 10000;
  }
}

void validate(const ProbeConfig& c) {
  if (!c.seed) fail(ErrorCode::kConfig, "a seed is required");
  if (c.sizes.empty()) fail(ErrorCode::kConfig, "at least one size n is required");
  for (std::size_t n : c.sizes) {
    if (n < 2) fail(ErrorCode::kInvalidSize, "n must be at least 2");
  }
  const std::size_t reps = c.replicates.value_or(default_probe_replicates(c.kind));
  if (reps < kMinReplicates) {
    fail(ErrorCode::kConfig,
         "at least " + std::to_string(kMinReplicates) + " replicates are required");
  }
  if (!(c.z_threshold > 0.0)) fail(ErrorCode::kConfig, "z threshold must be positive");
  const bool haar = c.ensemble == EnsembleKind::kHaarUnitary ||
                    c.ensemble == EnsembleKind::kHaarOrthogonal;
  if ((matrix_probe(c.kind) || c.kind == ProbeKind::kConjecture1) && !haar) {
    fail(ErrorCode::kConfig, std::string("probe ") + probe_name(c.kind) +
                                 " needs a Haar ensemble (unitary or orthogonal)");
  }
  if (c.kind == ProbeKind::kConditionalVariance &&
      !(c.point.s >= 0.0 && c.point.s <= 1.0 && c.point.t >= 0.0 && c.point.t <= 1.0)) {
    fail(ErrorCode::kDomain, "s and t must lie in [0,1]");
  }
  if (c.kind == ProbeKind::kTightnessSixth) {
    const Grid grid(c.grid_m);
    if (c.sweep.empty()) fail(ErrorCode::kConfig, "tightness sweep is empty");
    for (double r : c.sweep) {
      if (!(r > 0.0 && r <= 1.0) || !grid.index_of(r)) {
        fail(ErrorCode::kConfig, "tightness sweep value " + std::to_string(r) +
                                     " is not a positive grid level");
      }
    }
  }
}

ProbeReport run_probe(const ProbeConfig& input, std::size_t threads) {
  validate(input);
  ProbeReport report;
  report.config = input;
  const std::size_t reps = input.replicates.value_or(default_probe_replicates(input.kind));
  report.config.replicates = reps;
  const ProbeConfig& c = report.config;

  switch (c.kind) {
    case ProbeKind::kFourthMoment: report.quantity = "sum_ij w_ij^2"; break;
    case ProbeKind::kSixthMoment: report.quantity = "n sum_ij w_ij^3"; break;
    case ProbeKind::kQuadraticForm: report.quantity = "X^T V V^T X"; break;
    case ProbeKind::kConditionalVariance: report.quantity = "Var(S_s S'_t / n)"; break;
    case ProbeKind::kTightnessSixth: report.quantity = "E calV^6 / r^3 at (r, r)"; break;
    case ProbeKind::kConjecture1: report.quantity = "n^{1/2}(calB - I) given U"; break;
    case ProbeKind::kConjecture2: report.quantity = "n^{-1/2}(calT - n s t) given U"; break;
  }

  if (c.kind == ProbeKind::kConjecture1 || c.kind == ProbeKind::kConjecture2) {
    const bool haar = c.ensemble == EnsembleKind::kHaarUnitary ||
                      c.ensemble == EnsembleKind::kHaarOrthogonal;
    bool pass = true;
    for (std::size_t n : c.sizes) {
      ExperimentConfig e;
      e.ensemble = {c.ensemble, n};
      e.statistic = c.kind == ProbeKind::kConjecture1 ? Statistic::kConjectureProbe1
                                                      : Statistic::kConjectureProbe2;
      e.mode = Mode::kQuenchedU;
      e.grid_m = c.grid_m;
      e.replicates = reps;
      e.seed = c.seed;
      e.z_threshold = c.z_threshold;
      e.se_method = c.se_method;
      const ExperimentReport r = run_experiment(e, threads);
      ConjectureRow row;
      row.n = n;
      for (const auto& cmp : r.comparisons) {
        ++row.comparisons;
        row.max_abs_z = std::max(row.max_abs_z, std::abs(cmp.z));
        if (cmp.z_limit) row.max_abs_z_limit = std::max(row.max_abs_z_limit, std::abs(*cmp.z_limit));
      }
      row.fourth_moment = r.fourth_moment.value_or(Estimate{});
      row.verdict = r.verdict;
      pass = pass && r.verdict != Verdict::kFail;
      report.conjecture.push_back(row);
    }
    if (haar) {
      report.verdict = Verdict::kEvidenceOnly;
      report.note = "conjecture probe: consistency evidence only; U fixed per n, omega resampled";
    } else {
      report.verdict = pass ? Verdict::kPass : Verdict::kFail;
      report.note = "fixed DFT or permutation matrix: a proven limit, so the verdict applies";
    }
    return report;
  }

  if (c.kind == ProbeKind::kSixthMoment && reps < kSixthMomentMinReplicates) {
    report.warnings.push_back("sixth moments need at least 10000 replicates for a stable SE");
  }
  bool pass = true;
  for (std::size_t n : c.sizes) {
    if (c.kind == ProbeKind::kTightnessSixth) {
      for (auto& row : tightness_probe(c, n, reps, threads)) {
        pass = pass && row.pass;
        report.rows.push_back(row);
      }
    } else {
      ProbeRow row = scalar_probe(c, n, reps, threads);
      pass = pass && row.pass;
      report.rows.push_back(row);
    }
  }
  report.verdict = pass ? Verdict::kPass : Verdict::kFail;
  report.note = c.kind == ProbeKind::kTightnessSixth
                    ? "annealed over U and omega; ratios bounded by the widest point"
                    : "targets are exact finite-n moments";
  return report;
}

}  // namespace bridgetrunc
