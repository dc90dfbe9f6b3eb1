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

#ifndef BRIDGETRUNC_TARGETS_HPP_
#define BRIDGETRUNC_TARGETS_HPP_

#include <cstddef>

#include "bridgetrunc/ensembles.hpp"
#include "bridgetrunc/grid.hpp"

namespace bridgetrunc {

// E[w_ij w_kl] for an exchangeable weight matrix, by how the two entries meet.
struct EntryMoments {
  double same_entry = 0.0;
  double same_row = 0.0;  // i == k, j != l
  double same_col = 0.0;  // i != k, j == l
  double distinct = 0.0;  // i != k, j != l
};

EntryMoments entry_moments(EnsembleKind kind, std::size_t n);

// E sum_ij w_ij^2, i.e. n^2 E w_11^2.
double expected_sum_of_squares(EnsembleKind kind, std::size_t n);

// Cov(T[p][q], T[p2][q2]) for the top-left block sums of one weight matrix.
double block_covariance(const EntryMoments& m, std::size_t n, std::size_t p, std::size_t q,
                        std::size_t p2, std::size_t q2);

// calWinf + (sum_sq / n) Winf: covariance of n^{-1/2}(calT - n s t) given the
// weights, averaged over the environment.
double environment_covariance(double sum_sq, std::size_t n, Point a, Point b);

// Beta(b, (n-1)b) moment E w^k = prod_{r<k} (b + r) / (n b + r).
double dirichlet_marginal_moment(double beta_prime, std::size_t n, int k);

// n / (n b + 1): finite-n variance factor of one sum of Dirichlet weights.
double dirichlet_block_factor(double beta_prime, std::size_t n);

}  // namespace bridgetrunc

#endif  // BRIDGETRUNC_TARGETS_HPP_
