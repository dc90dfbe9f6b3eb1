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

#include "bridgetrunc/presets.hpp"

#include <string>
#include <vector>

#include "bridgetrunc/error.hpp"

namespace bridgetrunc {
namespace {

ExperimentConfig make(const char* name, EnsembleKind kind, std::size_t n, Statistic stat,
                      Mode mode, std::size_t replicates) {
  ExperimentConfig c;
  c.preset = name;
  c.ensemble = {kind, n};
  c.statistic = stat;
  c.mode = mode;
  c.replicates = replicates;
  return c;
}

std::vector<Preset> build() {
  using E = EnsembleKind;
  using S = Statistic;
  using M = Mode;
  std::vector<Preset> out;
  auto add = [&](const char* name, const char* target, ExperimentConfig c) {
    out.push_back({name, target, std::move(c)});
  };
  add("lemma-3.1", "n^{1/2}(B - I) => (1/b')^{1/2} B0",
      make("lemma-3.1", E::kHaarUnitary, 500, S::kOneParamDeterministic, M::kAnnealed, 5000));
  add("thm-3.2-quenched", "n^{1/2}(calB - S/n) => (1/b')^{1/2} B0 for fixed omega",
      make("thm-3.2-quenched", E::kHaarUnitary, 500, S::kOneParamQuenched, M::kQuenchedOmega,
           5000));
  add("thm-3.2-annealed", "n^{1/2}(calB - I) => (1 + 1/b')^{1/2} B0",
      make("thm-3.2-annealed", E::kHaarUnitary, 500, S::kOneParamAnnealed, M::kAnnealed, 5000));
  add("thm-3.3-dft", "n^{-1/2}(calT - E calT) => calWinf for the DFT matrix",
      make("thm-3.3-dft", E::kDft, 400, S::kDftAnnealed, M::kAnnealed, 4000));
  add("thm-3.4-det", "T - E T => (1/b')^{1/2} Winf",
      make("thm-3.4-det", E::kHaarUnitary, 300, S::kDetTruncCentered, M::kAnnealed, 3000));
  add("thm-3.5-quenched", "calV => (1/b')^{1/2} Winf for fixed omega",
      make("thm-3.5-quenched", E::kHaarUnitary, 300, S::kVQuenched, M::kQuenchedOmega, 3000));
  add("thm-3.5-annealed", "n^{-1/2}(calT - E calT) => calWinf",
      make("thm-3.5-annealed", E::kHaarUnitary, 300, S::kRandTruncAnnealed, M::kAnnealed, 3000));
  add("thm-3.6-permutation", "n^{-1/2}(T - E T) => Winf for uniform permutations",
      make("thm-3.6-permutation", E::kPermutation, 1000, S::kDetTruncCentered, M::kAnnealed,
           5000));
  add("thm-3.7-quenched", "n^{-1/2} calV => Winf for fixed omega, permutations",
      make("thm-3.7-quenched", E::kPermutation, 1000, S::kPermutationQuenched,
           M::kQuenchedOmega, 5000));
  add("thm-3.7-annealed", "n^{-1/2}(calT - E calT) => B00 for permutations",
      make("thm-3.7-annealed", E::kPermutation, 1000, S::kPermutationAnnealed, M::kAnnealed,
           5000));
  ExperimentConfig copula =
      make("sec-5.3-copula", E::kPermutation, 500, S::kEmpiricalCopula, M::kQuenchedU, 5000);
  copula.fixed_matrix = FixedMatrix::kIdentity;
  add("sec-5.3-copula", "calX_n => B00 for a fixed permutation", copula);
  add("prop-4.1-subordination", "calT and hatT have the same law given omega",
      make("prop-4.1-subordination", E::kHaarUnitary, 100, S::kSubordinationLaw,
           M::kQuenchedOmega, 5000));
  return out;
}

}  // namespace

std::span<const Preset> presets() {
  static const std::vector<Preset> all = build();
  return all;
}

const Preset& find_preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (name == p.name) return p;
  }
  fail(ErrorCode::kUnknownPreset, "unknown preset '" + std::string(name) + "'");
}

}  // namespace bridgetrunc
