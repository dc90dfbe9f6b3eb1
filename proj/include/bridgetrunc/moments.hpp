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

#ifndef BRIDGETRUNC_MOMENTS_HPP_
#define BRIDGETRUNC_MOMENTS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bridgetrunc/grid.hpp"
#include "bridgetrunc/limits.hpp"

namespace bridgetrunc {

enum class SeMethod { kJackknife, kBatchMeans };

const char* se_method_name(SeMethod method) noexcept;
SeMethod parse_se_method(std::string_view name);

struct MomentOptions {
  SeMethod method = SeMethod::kJackknife;
  std::size_t batches = 20;
};

struct Estimate {
  double value = 0.0;
  double se = 0.0;
  bool degenerate = false;  // se == 0
};

// Summation in a fixed binary tree, so the result does not depend on how the
// samples were produced.
double pairwise_sum(std::span<const double> x);

struct EmpiricalMoments {
  std::size_t replicates = 0;
  std::size_t dim = 0;
  std::vector<Estimate> means;
  // Upper triangle including the diagonal: (0,0), (0,1), ..., (d-1,d-1).
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<Estimate> covariances;
  SeMethod method = SeMethod::kJackknife;

  bool any_degenerate() const noexcept;
};

// samples is N x d, one replicate per row. Covariances are unbiased (N - 1).
EmpiricalMoments empirical_moments(const Eigen::MatrixXd& samples,
                                   const MomentOptions& options = {});

// Mean of a scalar sample with the standard error of the mean.
Estimate sample_mean(std::span<const double> x);

// Standardized fourth moment m4 / m2^2 about the sample mean; 3 for Gaussians.
Estimate standardized_fourth_moment(std::span<const double> x);

struct ZScore {
  double z = 0.0;
  bool pass = true;
};

// z = (emp - target) / se. A degenerate estimate passes only when it equals
// the target to within 1e-12 relative.
ZScore z_score(const Estimate& emp, double target, double threshold);

struct KernelComparison {
  Point p;
  Point q;
  double emp = 0.0;
  double se = 0.0;
  double target = 0.0;
  double z = 0.0;
  bool pass = true;
};

struct KernelVerdict {
  std::vector<KernelComparison> comparisons;
  double max_abs_z = 0.0;
  bool pass = true;
  std::string worst;  // the pair with the largest |z|
};

KernelVerdict compare_to_kernel(const EmpiricalMoments& emp, std::span<const Point> points,
                                const Kernel& kernel, double threshold);

}  // namespace bridgetrunc

#endif  // BRIDGETRUNC_MOMENTS_HPP_
