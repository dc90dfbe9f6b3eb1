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
#include <vector>

#include "bridgetrunc/error.hpp"
#include "bridgetrunc/limits.hpp"
#include "bridgetrunc/rng.hpp"
#include "doctest.h"

using namespace bridgetrunc;

TEST_CASE("kernel values") {
  const Point c{0.5, 0.5};
  CHECK(kernel_eval(KernelKind::kBivariateB00, c, c) == doctest::Approx(0.1875).epsilon(1e-15));
  CHECK(kernel_eval(KernelKind::kTiedDownWinf, c, c) == doctest::Approx(0.0625).epsilon(1e-15));
  CHECK(kernel_eval(KernelKind::kCalWinf, c, c) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(kernel_eval(KernelKind::kBridgeB0, {0.5, 0}, {0.5, 0}) == doctest::Approx(0.25));
  CHECK(kernel_eval(KernelKind::kBridgeB0, {0.25, 0}, {0.75, 0}) == doctest::Approx(0.0625));
  CHECK(kernel_eval(Kernel{KernelKind::kTiedDownWinf, 2.0}, c, c) == doctest::Approx(0.125));
  CHECK(kernel_eval(KernelKind::kTensorB0B0, c, c) == doctest::Approx(0.0625));
  for (auto k : {KernelKind::kBridgeB0, KernelKind::kBivariateB00, KernelKind::kTiedDownWinf,
                 KernelKind::kCalWinf}) {
    CHECK(kernel_eval(k, {0.0, 0.4}, {0.3, 0.7}) == 0.0);
    CHECK(parse_kernel(kernel_name(k)) == k);
  }
  CHECK(is_one_parameter(KernelKind::kBridgeB0));
  CHECK_FALSE(is_one_parameter(KernelKind::kCalWinf));
}

TEST_CASE("kernel domain") {
  CHECK_THROWS_AS(kernel_eval(KernelKind::kCalWinf, {1.2, 0.5}, {0.5, 0.5}), Error);
  CHECK_THROWS_AS(kernel_eval(KernelKind::kCalWinf, {0.5, -0.1}, {0.5, 0.5}), Error);
  CHECK_THROWS_AS(kernel_eval(Kernel{KernelKind::kCalWinf, 0.0}, {0.5, 0.5}, {0.5, 0.5}), Error);
  CHECK_THROWS_AS(parse_kernel("W2"), Error);
}

TEST_CASE("kernel identity") {
  CHECK(std::abs(kernel_identity_residual({0.5, 0.5}, {0.5, 0.5})) == 0.0);
  CHECK(std::abs(kernel_identity_residual({0.3, 0.7}, {0.6, 0.2})) < 1e-12);
  CHECK(std::abs(kernel_identity_residual({1.0, 0.7}, {0.6, 0.2})) < 1e-12);
  auto rng = RngStream::derive(3, StreamTag::kAuxiliary, 0);
  for (int r = 0; r < 1000; ++r) {
    const Point p{rng.uniform(), rng.uniform()};
    const Point q{rng.uniform(), rng.uniform()};
    CHECK(std::abs(kernel_identity_residual(p, q)) <= 1e-12);
  }
}

namespace {

// Empirical covariance of two grid cells over many limit draws.
struct Cov {
  double value;
  double se;
};

Cov draw_cov(const LimitSampler& sampler, std::size_t a, std::size_t b, int draws,
             std::uint64_t seed) {
  std::vector<double> x, y;
  for (int r = 0; r < draws; ++r) {
    auto rng = RngStream::derive(seed, StreamTag::kLimit, r);
    if (is_one_parameter(sampler.kernel().kind)) {
      const auto p = sampler.sample1(rng);
      x.push_back(p[a]);
      y.push_back(p[b]);
    } else {
      const auto p = sampler.sample2(rng);
      x.push_back(p.values()[a]);
      y.push_back(p.values()[b]);
    }
  }
  double mx = 0, my = 0;
  for (int r = 0; r < draws; ++r) {
    mx += x[r];
    my += y[r];
  }
  mx /= draws;
  my /= draws;
  double c = 0, c2 = 0;
  for (int r = 0; r < draws; ++r) {
    const double p = (x[r] - mx) * (y[r] - my);
    c += p;
    c2 += p * p;
  }
  const double mean = c / draws;
  return {c / (draws - 1), std::sqrt((c2 / draws - mean * mean) / draws)};
}

}  // namespace

TEST_CASE("constructive sampler of calWinf") {
  const Grid g(10);
  const LimitSampler sampler(Kernel{KernelKind::kCalWinf, 1.0}, g, SamplerMethod::kConstructive);
  const std::size_t centre = 5 * g.size() + 5;
  const auto cov = draw_cov(sampler, centre, centre, 20000, 11);
  CHECK(std::abs(cov.value - 0.125) < 4 * cov.se);
}

TEST_CASE("samplers match every kernel") {
  const Grid g(4);
  const std::size_t a = 2 * g.size() + 2;  // (.5, .5)
  const std::size_t b = 1 * g.size() + 3;  // (.25, .75)
  for (auto kind : {KernelKind::kBivariateB00, KernelKind::kTiedDownWinf, KernelKind::kCalWinf,
                    KernelKind::kTensorB0B0}) {
    for (auto method : {SamplerMethod::kConstructive, SamplerMethod::kCholeskyOnGrid}) {
      if (kind == KernelKind::kTensorB0B0 && method == SamplerMethod::kCholeskyOnGrid) continue;
      const LimitSampler sampler(Kernel{kind, 1.5}, g, method);
      const auto cov = draw_cov(sampler, a, b, 8000, 12 + static_cast<int>(kind));
      const double target = kernel_eval(Kernel{kind, 1.5}, {0.5, 0.5}, {0.25, 0.75});
      CAPTURE(kernel_name(kind));
      CAPTURE(static_cast<int>(method));
      CHECK(std::abs(cov.value - target) < 4 * cov.se);
    }
  }
  const LimitSampler bridge(Kernel{KernelKind::kBridgeB0, 1.0}, g, SamplerMethod::kCholeskyOnGrid);
  const auto cov = draw_cov(bridge, 1, 3, 8000, 21);
  CHECK(std::abs(cov.value - 0.0625) < 4 * cov.se);
}

TEST_CASE("limit paths are pinned") {
  const Grid g(5);
  auto rng = RngStream::derive(4, StreamTag::kLimit, 0);
  const LimitSampler w(Kernel{KernelKind::kTiedDownWinf, 1.0}, g, SamplerMethod::kConstructive);
  const auto p = w.sample2(rng);
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(std::abs(p.at(0, k)) < 1e-12);
    CHECK(std::abs(p.at(k, 0)) < 1e-12);
    CHECK(std::abs(p.at(5, k)) < 1e-12);
    CHECK(std::abs(p.at(k, 5)) < 1e-12);
  }
  const LimitSampler b(Kernel{KernelKind::kBridgeB0, 1.0}, g, SamplerMethod::kCholeskyOnGrid);
  const auto q = b.sample1(rng);
  CHECK(q[0] == 0.0);
  CHECK(q[5] == 0.0);
}
