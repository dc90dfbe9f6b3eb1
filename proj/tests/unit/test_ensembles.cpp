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

#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <vector>

#include "bridgetrunc/ensembles.hpp"
#include "bridgetrunc/error.hpp"
#include "bridgetrunc/rng.hpp"
#include "bridgetrunc/targets.hpp"
#include "doctest.h"

using namespace bridgetrunc;

namespace {

RngStream stream(std::uint64_t i) { return RngStream::derive(2026, StreamTag::kMatrix, i); }

}  // namespace

TEST_CASE("ensemble names round trip") {
  for (auto k : {EnsembleKind::kHaarUnitary, EnsembleKind::kHaarOrthogonal, EnsembleKind::kDft,
                 EnsembleKind::kPermutation}) {
    CHECK(parse_ensemble(ensemble_name(k)) == k);
  }
  CHECK_THROWS_AS(parse_ensemble("gue"), Error);
  CHECK(EnsembleSpec{EnsembleKind::kHaarUnitary, 4}.beta_prime() == 1.0);
  CHECK(EnsembleSpec{EnsembleKind::kHaarOrthogonal, 4}.beta_prime() == 0.5);
  CHECK_FALSE(EnsembleSpec{EnsembleKind::kDft, 4}.beta_prime().has_value());
}

TEST_CASE("n = 1 unitary has a unit entry") {
  auto rng = stream(0);
  const auto m = sample_matrix({EnsembleKind::kHaarUnitary, 1}, rng);
  CHECK(std::abs(m.entry(0, 0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(squared_moduli(m)(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("n = 2 orthogonal has orthonormal rows") {
  for (std::uint64_t r = 0; r < 20; ++r) {
    auto rng = stream(r);
    const auto m = sample_matrix({EnsembleKind::kHaarOrthogonal, 2}, rng);
    CHECK(m.unitarity_defect() < 1e-14);
    const auto w = squared_moduli(m);
    CHECK(std::abs(w(0, 0) + w(0, 1) - 1.0) < 1e-14);
    CHECK(std::abs(m.entry(0, 0).imag()) == 0.0);
  }
}

TEST_CASE("DFT matrix") {
  const auto f1 = dft_matrix(1);
  CHECK(std::abs(f1.entry(0, 0) - std::complex<double>(1.0, 0.0)) < 1e-15);

  const auto f2 = dft_matrix(2);
  const double h = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(f2.entry(0, 0) - h) < 1e-15);
  CHECK(std::abs(f2.entry(0, 1) - h) < 1e-15);
  CHECK(std::abs(f2.entry(1, 0) - h) < 1e-15);
  CHECK(std::abs(f2.entry(1, 1) + h) < 1e-15);

  const auto w8 = squared_moduli(dft_matrix(8));
  double gap = 0.0;
  for (std::size_t j = 0; j < 8; ++j)
    for (std::size_t k = 0; k < 8; ++k) gap = std::max(gap, std::abs(w8(j, k) - 0.125));
  CHECK(gap < 1e-14);

  const auto w4 = squared_moduli(dft_matrix(4));
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t k = 0; k < 4; ++k) CHECK(w4(j, k) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("permutations") {
  auto rng = stream(1);
  const auto one = sample_permutation(1, rng);
  CHECK(one.permutation() == Permutation::identity(1));

  CHECK_THROWS_AS(Permutation({0, 0, 1}), Error);
  CHECK_THROWS_AS(Permutation({0, 3, 1}), Error);
  const Permutation p({2, 0, 1});
  CHECK(p.inverse().image() == std::vector<std::size_t>{1, 2, 0});

  const auto w = squared_moduli(sample_permutation(50, rng));
  CHECK(w.is_permutation());
  CHECK(w.stochastic_defect() == 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < 50; ++i)
    for (std::size_t j = 0; j < 50; ++j) {
      const double x = w(i, j);
      CHECK((x == 0.0 || x == 1.0));
      total += x;
    }
  CHECK(total == 50.0);
}

TEST_CASE("uniform permutations of three letters") {
  constexpr int kDraws = 60000;
  std::map<std::vector<std::size_t>, int> freq;
  auto rng = stream(2);
  for (int r = 0; r < kDraws; ++r) ++freq[sample_permutation(3, rng).permutation().image()];
  CHECK(freq.size() == 6);
  const double p = 1.0 / 6.0;
  const double se = std::sqrt(p * (1 - p) / kDraws);
  for (const auto& [perm, c] : freq) {
    CHECK(std::abs(static_cast<double>(c) / kDraws - p) < 4 * se);
  }
}

TEST_CASE("Haar weights are doubly stochastic") {
  for (auto kind : {EnsembleKind::kHaarUnitary, EnsembleKind::kHaarOrthogonal}) {
    auto rng = stream(3);
    const auto m = sample_matrix({kind, 100}, rng);
    CHECK(m.unitarity_defect() < 1e-10);
    const auto w = squared_moduli(m, UnitarityCheck::kFull);
    CHECK(w.stochastic_defect() < 1e-12);
    CHECK(w.to_dense().minCoeff() >= 0.0);
  }
}

TEST_CASE("same stream, same matrix") {
  auto a = stream(9);
  auto b = stream(9);
  const auto ma = sample_matrix({EnsembleKind::kHaarUnitary, 30}, a);
  const auto mb = sample_matrix({EnsembleKind::kHaarUnitary, 30}, b);
  CHECK(squared_moduli(ma).to_dense() == squared_moduli(mb).to_dense());
}

// Without the phase correction the QR factor is not Haar, and its second
// moments drift away from the Beta values.
TEST_CASE("Haar second moments match the Beta law") {
  constexpr std::size_t n = 12;
  constexpr int kDraws = 3000;
  for (auto kind : {EnsembleKind::kHaarUnitary, EnsembleKind::kHaarOrthogonal}) {
    std::vector<double> x;
    for (int r = 0; r < kDraws; ++r) {
      auto rng = RngStream::derive(77, StreamTag::kMatrix, r);
      x.push_back(squared_moduli(sample_matrix({kind, n}, rng)).sum_of_squares());
    }
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / kDraws;
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    const double se = std::sqrt(var / (kDraws - 1) / kDraws);
    const double target = expected_sum_of_squares(kind, n);
    CHECK(std::abs(mean - target) < 4 * se);
  }
  CHECK(expected_sum_of_squares(EnsembleKind::kHaarUnitary, 12) ==
        doctest::Approx(2.0 * 12 / 13).epsilon(1e-15));
  CHECK(expected_sum_of_squares(EnsembleKind::kHaarOrthogonal, 12) ==
        doctest::Approx(3.0 * 12 / 14).epsilon(1e-15));
}

TEST_CASE("first column weights") {
  auto rng = stream(4);
  CHECK(sample_first_column_weights(1, 1.0, rng) == std::vector<double>{1.0});

  const auto w = sample_first_column_weights(200, 0.5, rng);
  CHECK(std::abs(std::accumulate(w.begin(), w.end(), 0.0) - 1.0) < 1e-12);
  for (double x : w) CHECK(x >= 0.0);

  constexpr std::size_t n = 50;
  constexpr int kDraws = 100000;
  double m1 = 0.0, m2 = 0.0, m4 = 0.0;
  for (int r = 0; r < kDraws; ++r) {
    const double x = sample_first_column_weights(n, 1.0, rng)[0];
    m1 += x;
    m2 += x * x;
    m4 += x * x * x * x;
  }
  m1 /= kDraws;
  m2 /= kDraws;
  m4 /= kDraws;
  const double target = 2.0 / (n * (n + 1.0));
  CHECK(target == doctest::Approx(2.0 / 2550.0));
  const double se = std::sqrt((m4 - m2 * m2) / kDraws);
  CHECK(std::abs(m2 - target) < 4 * se);
  CHECK(std::abs(m1 - 1.0 / n) < 4 * std::sqrt((m2 - m1 * m1) / kDraws));
}

TEST_CASE("weights from a hand-built matrix") {
  Eigen::MatrixXd d(2, 2);
  d << 0.3, 0.7, 0.7, 0.3;
  const WeightMatrix w(d);
  CHECK(w.row_sum(0) == doctest::Approx(1.0));
  CHECK(w.col_sum(1) == doctest::Approx(1.0));
  CHECK(w.stochastic_defect() < 1e-15);
  CHECK(w.sum_of_squares() == doctest::Approx(2 * (0.09 + 0.49)));
}
