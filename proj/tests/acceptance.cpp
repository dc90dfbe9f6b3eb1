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

// Acceptance suite: one [PASS]/[FAIL] line per criterion. Fully seeded.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bridgetrunc/ensembles.hpp"
#include "bridgetrunc/environment.hpp"
#include "bridgetrunc/experiment.hpp"
#include "bridgetrunc/limits.hpp"
#include "bridgetrunc/presets.hpp"
#include "bridgetrunc/probes.hpp"
#include "bridgetrunc/processes.hpp"
#include "bridgetrunc/report_io.hpp"
#include "bridgetrunc/rng.hpp"
#include "oracles.hpp"

using namespace bridgetrunc;

namespace {

constexpr std::uint64_t kSuiteSeed = 42;
constexpr std::size_t kReproThreads = 8;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Every statistical run, kept for the thread-count comparison.
struct Recorded {
  std::string name;
  std::function<std::string(std::size_t)> rerun;
  std::string json;
};
std::vector<Recorded> recorded;

std::string fmt(const char* format, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, x);
  return buf;
}

void append(std::string& detail, const std::string& item) {
  if (!detail.empty()) detail += "; ";
  detail += item;
}

const Comparison* centre_variance(const ExperimentReport& r) {
  const Point c = r.config.points.front();
  for (const auto& cmp : r.comparisons)
    if (cmp.section == "cov" && cmp.p == c && cmp.q == c) return &cmp;
  return nullptr;
}

ExperimentReport run_recorded(const std::string& name, ExperimentConfig c) {
  c.seed = kSuiteSeed;
  ExperimentReport r = run_experiment(c, 1);
  recorded.push_back({name, [c](std::size_t t) { return report_to_json(run_experiment(c, t)); },
                      report_to_json(r)});
  return r;
}

ProbeReport probe_recorded(const std::string& name, ProbeConfig c) {
  c.seed = kSuiteSeed;
  ProbeReport r = run_probe(c, 1);
  recorded.push_back(
      {name, [c](std::size_t t) { return probe_to_json(run_probe(c, t)); }, probe_to_json(r)});
  return r;
}

ExperimentConfig preset(const char* name) { return find_preset(name).config; }

ExperimentConfig with_ensemble(ExperimentConfig c, EnsembleKind kind) {
  c.ensemble.kind = kind;
  return c;
}

// Runs an experiment and folds its verdict into an outcome.
void gate(Outcome& o, const std::string& name, const ExperimentConfig& c) {
  const ExperimentReport r = run_recorded(name, c);
  const bool ok = r.verdict == Verdict::kPass;
  std::string item = name + (ok ? " ok" : " FAILED") + " max|z|=" + fmt("%.2f", r.max_abs_z);
  if (const Comparison* v = centre_variance(r)) {
    item += " var=" + fmt("%.4f", v->emp);
    if (v->limit) item += " (limit " + fmt("%.4f", *v->limit) + ")";
  }
  if (!r.ks.empty()) {
    double pmin = 1.0;
    for (const auto& k : r.ks) pmin = std::min(pmin, k.p_value);
    item += " min KS p=" + fmt("%.3f", pmin);
  }
  o.pass = o.pass && ok;
  append(o.detail, item);
}

Outcome exact_algebra() {
  Outcome o;
  double route_dev = 0.0;
  for (std::uint64_t r = 0; r < 50; ++r) {
    auto rng = RngStream::derive(kSuiteSeed, StreamTag::kAuxiliary, r);
    const std::size_t n = 3 + static_cast<std::size_t>(rng.uniform() * 120);
    const Grid grid(1 + static_cast<std::size_t>(rng.uniform() * 25));
    const EnsembleKind kinds[] = {EnsembleKind::kHaarUnitary, EnsembleKind::kHaarOrthogonal,
                                  EnsembleKind::kDft, EnsembleKind::kPermutation};
    auto mrng = RngStream::derive(kSuiteSeed, StreamTag::kMatrix, r);
    const auto w = squared_moduli(sample_matrix({kinds[r % 4], n}, mrng));
    auto erng = RngStream::derive(kSuiteSeed, StreamTag::kEnvironment, r);
    const SortedEnvironment env(sample_environment(n, erng));
    route_dev = std::max(route_dev, v_process_routes(w, env, grid).max_deviation);
  }

  // n^{-1/2}(calT - nst) = n^{-1/2} S~ (x) S~' + S~ (x) I + I (x) S~' for the DFT matrix.
  double dft_dev = 0.0;
  for (std::uint64_t r = 0; r < 20; ++r) {
    const std::size_t n = 10 + 37 * r;
    const Grid grid(20);
    const auto w = squared_moduli(dft_matrix(n));
    auto erng = RngStream::derive(kSuiteSeed, StreamTag::kEnvironment, 100 + r);
    const Environment raw = sample_environment(n, erng);
    const SortedEnvironment env(raw);
    const auto lhs = centered_scaled(rand_truncation_path(w, env, grid), Centering::kAnnealedMean,
                                     Scale::kInvRootN, {n, &env});
    const double rn = std::sqrt(static_cast<double>(n));
    for (std::size_t k = 0; k < grid.size(); ++k)
      for (std::size_t l = 0; l < grid.size(); ++l) {
        const double s = grid.level(k);
        const double t = grid.level(l);
        const double a = normalized_counting(raw.rows, s);
        const double b = normalized_counting(raw.cols, t);
        dft_dev = std::max(dft_dev, std::abs(lhs.at(k, l) - (a * b / rn + a * t + s * b)));
      }
  }

  double identity = 0.0;
  auto prng = RngStream::derive(kSuiteSeed, StreamTag::kAuxiliary, 999);
  for (int r = 0; r < 100; ++r) {
    const Point p{prng.uniform(), prng.uniform()};
    const Point q{prng.uniform(), prng.uniform()};
    identity = std::max(identity, std::abs(kernel_identity_residual(p, q)));
  }
  o.pass = route_dev <= 1e-8 && dft_dev <= 1e-10 && identity <= 1e-12;
  o.detail = "V routes " + fmt("%.2e", route_dev) + " (<=1e-8), DFT decomposition " +
             fmt("%.2e", dft_dev) + " (<=1e-10), kernel identity " + fmt("%.2e", identity) +
             " (<=1e-12)";
  return o;
}

Outcome unitarity() {
  Outcome o;
  const EnsembleKind kinds[] = {EnsembleKind::kHaarUnitary, EnsembleKind::kHaarOrthogonal,
                                EnsembleKind::kDft, EnsembleKind::kPermutation};
  const std::size_t sizes[] = {10, 100, 500};
  double unit = 0.0;
  double stoch = 0.0;
  int count = 0;
  for (int r = 0; r < 200; ++r) {
    const EnsembleKind kind = kinds[r % 4];
    const std::size_t n = sizes[(r / 4) % 3];
    auto rng = RngStream::derive(kSuiteSeed, StreamTag::kMatrix, 10000 + r);
    const auto m = sample_matrix({kind, n}, rng);
    unit = std::max(unit, m.unitarity_defect());
    stoch = std::max(stoch, squared_moduli(m, UnitarityCheck::kStochastic).stochastic_defect());
    ++count;
  }
  o.pass = unit <= 1e-10 && stoch <= 1e-12;
  o.detail = std::to_string(count) + " matrices: max |U*U - I| " + fmt("%.2e", unit) +
             " (<=1e-10), max row/col sum defect " + fmt("%.2e", stoch) + " (<=1e-12)";
  return o;
}

Outcome brute_force() {
  Outcome o;
  double gap = 0.0;
  for (std::uint64_t r = 0; r < 100; ++r) {
    auto rng = RngStream::derive(kSuiteSeed, StreamTag::kAuxiliary, 5000 + r);
    const std::size_t n = 1 + r % 8;
    const Grid grid(1 + r % 12);
    const EnsembleKind kinds[] = {EnsembleKind::kHaarUnitary, EnsembleKind::kHaarOrthogonal,
                                  EnsembleKind::kDft, EnsembleKind::kPermutation};
    auto mrng = RngStream::derive(kSuiteSeed, StreamTag::kMatrix, 5000 + r);
    const auto m = sample_matrix({kinds[r % 4], n}, mrng);
    const auto w = squared_moduli(m);
    const auto dense = w.to_dense();
    const Environment env = oracle::random_environment(n, rng);
    const SortedEnvironment sorted(env);
    gap = std::max(gap, oracle::max_path_gap(rand_truncation_path(w, sorted, grid),
                                             [&](double s, double t) {
                                               return oracle::rand_truncation(dense, env, s, t);
                                             }));
    gap = std::max(gap, oracle::max_path_gap(v_process(w, sorted, grid), [&](double s, double t) {
      return oracle::v_process(dense, env, s, t);
    }));
    gap = std::max(gap, oracle::max_path_gap(subordinated_path(w, sorted, grid),
                                             [&](double s, double t) {
                                               return oracle::subordinated(dense, env, s, t);
                                             }));
    auto prng = RngStream::derive(kSuiteSeed, StreamTag::kFixed, 5000 + r);
    const auto sigma = sample_permutation(n, prng).permutation();
    gap = std::max(gap, oracle::max_path_gap(empirical_copula_path(env, sigma, grid),
                                             [&](double s, double t) {
                                               return oracle::copula(env, sigma.image(), s, t);
                                             }));
  }
  o.pass = gap <= 1e-12;
  o.detail = "100 instances, n <= 8: max gap to direct sums " + fmt("%.2e", gap) + " (<=1e-12)";
  return o;
}

Outcome one_parameter() {
  Outcome o;
  for (auto kind : {EnsembleKind::kHaarUnitary, EnsembleKind::kHaarOrthogonal}) {
    const std::string tag = kind == EnsembleKind::kHaarUnitary ? "/unitary" : "/orthogonal";
    for (const char* name : {"lemma-3.1", "thm-3.2-annealed", "thm-3.2-quenched"})
      gate(o, name + tag, with_ensemble(preset(name), kind));
  }
  return o;
}

Outcome dft() {
  Outcome o;
  gate(o, "thm-3.3-dft", preset("thm-3.3-dft"));
  return o;
}

Outcome haar_two_parameter() {
  Outcome o;
  for (auto kind : {EnsembleKind::kHaarUnitary, EnsembleKind::kHaarOrthogonal}) {
    const std::string tag = kind == EnsembleKind::kHaarUnitary ? "/unitary" : "/orthogonal";
    for (const char* name : {"thm-3.4-det", "thm-3.5-quenched", "thm-3.5-annealed"})
      gate(o, name + tag, with_ensemble(preset(name), kind));
  }
  return o;
}

Outcome permutations() {
  Outcome o;
  for (const char* name : {"thm-3.6-permutation", "thm-3.7-quenched", "thm-3.7-annealed"})
    gate(o, name, preset(name));
  return o;
}

Outcome subordination() {
  Outcome o;
  gate(o, "prop-4.1-subordination", preset("prop-4.1-subordination"));
  return o;
}

Outcome moment_probes() {
  Outcome o;
  auto one = [&](const std::string& name, ProbeKind kind, EnsembleKind ensemble, std::size_t n,
                 std::optional<std::size_t> reps) {
    ProbeConfig c;
    c.kind = kind;
    c.ensemble = ensemble;
    c.sizes = {n};
    c.replicates = reps;
    const ProbeReport r = probe_recorded(name, c);
    const ProbeRow& row = r.rows.front();
    const bool ok = r.verdict == Verdict::kPass;
    std::string item = name + (ok ? " ok " : " FAILED ") + fmt("%.5f", row.estimate) + " +- " +
                       fmt("%.5f", row.se);
    if (row.target && !row.gate_limit) item += " vs " + fmt("%.5f", *row.target);
    if (row.gate_limit) item += " vs limit " + fmt("%.4f", *row.limit) + " z=" +
                                fmt("%.2f", *row.z_limit);
    o.pass = o.pass && ok;
    append(o.detail, item);
  };
  one("fourth/unitary", ProbeKind::kFourthMoment, EnsembleKind::kHaarUnitary, 100, std::nullopt);
  one("fourth/orthogonal", ProbeKind::kFourthMoment, EnsembleKind::kHaarOrthogonal, 100,
      std::nullopt);
  one("sixth/unitary", ProbeKind::kSixthMoment, EnsembleKind::kHaarUnitary, 100, std::nullopt);
  one("quadratic-form/unitary", ProbeKind::kQuadraticForm, EnsembleKind::kHaarUnitary, 200, 2000);
  one("conditional-variance", ProbeKind::kConditionalVariance, EnsembleKind::kHaarUnitary, 100,
      std::nullopt);
  return o;
}

Outcome copula() {
  Outcome o;
  gate(o, "sec-5.3-copula/identity", preset("sec-5.3-copula"));
  ExperimentConfig random = preset("sec-5.3-copula");
  random.fixed_matrix = FixedMatrix::kSampled;
  gate(o, "sec-5.3-copula/random", random);
  return o;
}

Outcome reproducibility() {
  Outcome o;
  std::size_t same = 0;
  for (const auto& r : recorded) {
    if (r.rerun(kReproThreads) == r.json) {
      ++same;
    } else {
      o.pass = false;
      append(o.detail, r.name + " differs");
    }
  }
  append(o.detail, std::to_string(same) + "/" + std::to_string(recorded.size()) +
                       " reports byte-identical at 1 and " + std::to_string(kReproThreads) +
                       " threads");
  return o;
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  Outcome (*run)();
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "exact algebra", 10, exact_algebra},
      {2, "unitarity and stochasticity", 30, unitarity},
      {3, "brute-force oracles", 10, brute_force},
      {4, "one-parameter variances", 120, one_parameter},
      {5, "DFT annealed limit", 60, dft},
      {6, "Haar two-parameter limits", 1200, haar_two_parameter},
      {7, "permutation limits", 120, permutations},
      {8, "subordination in law", 300, subordination},
      {9, "moment probes", 600, moment_probes},
      {10, "fixed-permutation copula", 120, copula},
      {11, "thread-count reproducibility", 0, reproducibility},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt("%.1f s", secs);
    if (c.budget_seconds > 0) {
      timing += " of " + fmt("%.0f", c.budget_seconds) + " s";
      if (secs > c.budget_seconds) {
        o.pass = false;
        timing += " OVER BUDGET";
      }
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %d %s: %s (%s)\n", o.pass ? "PASS" : "FAIL", c.id, c.title,
                o.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of 11 criteria passed\n", 11 - failed);
  return failed == 0 ? 0 : 1;
}
