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

#ifndef BRIDGETRUNC_PROCESSES_HPP_
#define BRIDGETRUNC_PROCESSES_HPP_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bridgetrunc/ensembles.hpp"
#include "bridgetrunc/environment.hpp"
#include "bridgetrunc/grid.hpp"

namespace bridgetrunc {

// Statistic names carried by raw paths.
namespace stat_name {
inline constexpr const char* kDetTruncation = "T";
inline constexpr const char* kRandTruncation = "calT";
inline constexpr const char* kSubordinated = "hatT";
inline constexpr const char* kVProcess = "calV";
inline constexpr const char* kCopula = "calX";
inline constexpr const char* kOneParamDet = "B";
inline constexpr const char* kOneParamRand = "calB";
}  // namespace stat_name

// K(p, q) = sum_{i < p, j < q} w_ij for p, q in 0..n.
class PrefixGrid {
 public:
  PrefixGrid(std::size_t n, std::vector<double> values)
      : n_(n), values_(std::move(values)) {}

  std::size_t n() const noexcept { return n_; }
  double at(std::size_t p, std::size_t q) const noexcept {
    return values_[q * (n_ + 1) + p];
  }

 private:
  std::size_t n_;
  std::vector<double> values_;  // column-major, (n+1) x (n+1)
};

// Compensated summation is used above this size.
inline constexpr std::size_t kKahanThreshold = 1024;

PrefixGrid prefix_grid(const WeightMatrix& w);

// T_{s,t} = K(floor(n s), floor(n t)).
GridPath2 det_truncation_path(const WeightMatrix& w, const Grid& grid);
GridPath2 det_truncation_path(const PrefixGrid& k, const Grid& grid);

// calT_{s,t} = sum_ij w_ij 1{R_i <= s} 1{C_j <= t}, read off the prefix grid of
// the matrix with rows and columns sorted by their marks.
GridPath2 rand_truncation_path(const WeightMatrix& w, const SortedEnvironment& env,
                               const Grid& grid);

// hatT_{s,t} = T at (S_s / n, S'_t / n): the unpermuted prefix grid read at the
// counts.
GridPath2 subordinated_path(const WeightMatrix& w, const SortedEnvironment& env,
                            const Grid& grid);
GridPath2 subordinated_path(const PrefixGrid& k, const SortedEnvironment& env,
                            const Grid& grid);

// calV = calT - S (x) S' / n (route A) and
// calV = sum_ij (w_ij - 1/n)(1{R_i <= s} - s)(1{C_j <= t} - t) (route B).
// The two agree only for doubly stochastic w.
struct VProcessRoutes {
  GridPath2 subtraction;
  GridPath2 centered_sum;
  double max_deviation = 0.0;
};

inline constexpr double kRouteAgreementTolerance = 1e-8;

VProcessRoutes v_process_routes(const WeightMatrix& w, const SortedEnvironment& env,
                                const Grid& grid);
// Route A, after checking it against route B; contract error on disagreement.
GridPath2 v_process(const WeightMatrix& w, const SortedEnvironment& env,
                    const Grid& grid);

// calX_n(s,t) = n^{-1/2} (sum_i 1{R_i <= s} 1{C_sigma(i) <= t} - n s t).
GridPath2 empirical_copula_path(const Environment& env, const Permutation& sigma,
                                const Grid& grid);

// (B, calB) for a weight vector summing to one: B_s sums the first floor(n s)
// weights, calB_s the weights of rows with R_i <= s.
std::pair<GridPath1, GridPath1> one_param_paths(std::span<const double> weights,
                                                const SortedMarks& rows,
                                                const Grid& grid);

enum class Centering {
  kNone,
  kDeterministicMean,  // floor(ns) floor(nt) / n, or floor(ns)/n for B
  kAnnealedMean,       // n s t, or s (the identity I) for one-parameter paths
  kConditionalMean,    // S_s S'_t / n, or S_s / n
};

enum class Scale { kOne, kRootN, kInvRootN };

struct CenteringContext {
  std::size_t n = 0;
  const SortedEnvironment* env = nullptr;  // required for kConditionalMean
};

GridPath2 centered_scaled(const GridPath2& path, Centering centering, Scale scale,
                          const CenteringContext& ctx);
GridPath1 centered_scaled(const GridPath1& path, Centering centering, Scale scale,
                          const CenteringContext& ctx);

// Smallest k with mark <= s_k.
std::size_t level_bin(double mark, const Grid& grid) noexcept;

}  // namespace bridgetrunc

#endif  // BRIDGETRUNC_PROCESSES_HPP_
