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

#ifndef BRIDGETRUNC_LIMITS_HPP_
#define BRIDGETRUNC_LIMITS_HPP_

#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "bridgetrunc/grid.hpp"
#include "bridgetrunc/rng.hpp"

namespace bridgetrunc {

enum class KernelKind {
  kBridgeB0,      // s^s' - ss'
  kBivariateB00,  // (s^s')(t^t') - ss'tt'
  kTiedDownWinf,  // (s^s' - ss')(t^t' - tt')
  kCalWinf,       // ss'(t^t') + (s^s')tt' - 2ss'tt'
  kTensorB0B0,    // B0(s) B0'(t): covariance of kTiedDownWinf, not Gaussian
};

const char* kernel_name(KernelKind kind) noexcept;
KernelKind parse_kernel(std::string_view name);
bool is_one_parameter(KernelKind kind) noexcept;

struct Kernel {
  KernelKind kind = KernelKind::kBridgeB0;
  double prefactor = 1.0;
};

// Throws a domain error for coordinates outside [0,1] or a prefactor <= 0.
double kernel_eval(const Kernel& kernel, Point p, Point q);
double kernel_eval(KernelKind kind, Point p, Point q);

// B00 - (Winf + calWinf); zero for every pair of points.
double kernel_identity_residual(Point p, Point q);

enum class SamplerMethod { kConstructive, kCholeskyOnGrid };

inline constexpr double kCholeskyJitter = 1e-12;

// Draws limit paths on a grid. The Cholesky factor, when used, is built once
// in the constructor and shared read-only afterwards.
class LimitSampler {
 public:
  LimitSampler(Kernel kernel, Grid grid, SamplerMethod method);

  const Kernel& kernel() const noexcept { return kernel_; }
  const Grid& grid() const noexcept { return grid_; }
  SamplerMethod method() const noexcept { return method_; }

  GridPath1 sample1(RngStream& rng) const;
  GridPath2 sample2(RngStream& rng) const;

 private:
  std::vector<double> bridge(RngStream& rng) const;
  std::vector<double> sheet(RngStream& rng) const;
  std::vector<double> cholesky_draw(RngStream& rng) const;

  Kernel kernel_;
  Grid grid_;
  SamplerMethod method_;
  std::vector<std::size_t> active_;  // flattened grid indices with positive variance
  Eigen::MatrixXd factor_;           // lower Cholesky factor over active_
};

}  // namespace bridgetrunc

#endif  // BRIDGETRUNC_LIMITS_HPP_
