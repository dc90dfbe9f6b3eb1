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

#include "bridgetrunc/targets.hpp"

#include <algorithm>

#include "bridgetrunc/error.hpp"
#include "bridgetrunc/limits.hpp"

namespace bridgetrunc {

EntryMoments entry_moments(EnsembleKind kind, std::size_t n) {
  require(n >= 1, ErrorCode::kInvalidSize, "n must be at least 1");
  const double nn = static_cast<double>(n);
  EntryMoments m;
  switch (kind) {
    case EnsembleKind::kHaarUnitary:
      m.same_entry = 2.0 / (nn * (nn + 1.0));
      m.same_row = m.same_col = 1.0 / (nn * (nn + 1.0));
      m.distinct = n > 1 ? 1.0 / (nn * nn - 1.0) : 0.0;
      break;
    case EnsembleKind::kHaarOrthogonal:
      m.same_entry = 3.0 / (nn * (nn + 2.0));
      m.same_row = m.same_col = 1.0 / (nn * (nn + 2.0));
      m.distinct = n > 1 ? (nn + 1.0) / (nn * (nn - 1.0) * (nn + 2.0)) : 0.0;
      break;
    case EnsembleKind::kPermutation:
      m.same_entry = 1.0 / nn;
      m.same_row = m.same_col = 0.0;
      m.distinct = n > 1 ? 1.0 / (nn * (nn - 1.0)) : 0.0;
      break;
    case EnsembleKind::kDft:
      m.same_entry = m.same_row = m.same_col = m.distinct = 1.0 / (nn * nn);
      break;
  }
  return m;
}

double expected_sum_of_squares(EnsembleKind kind, std::size_t n) {
  const double nn = static_cast<double>(n);
  return nn * nn * entry_moments(kind, n).same_entry;
}

double block_covariance(const EntryMoments& m, std::size_t n, std::size_t p, std::size_t q,
                        std::size_t p2, std::size_t q2) {
  const double nn = static_cast<double>(n);
  const double base = 1.0 / (nn * nn);
  const double a = static_cast<double>(std::min(p, p2));
  const double b = static_cast<double>(std::min(q, q2));
  const double rows = static_cast<double>(p) * static_cast<double>(p2);
  const double cols = static_cast<double>(q) * static_cast<double>(q2);
  return a * b * (m.same_entry - base) + a * (cols - b) * (m.same_row - base) +
         b * (rows - a) * (m.same_col - base) + (rows - a) * (cols - b) * (m.distinct - base);
}

double environment_covariance(double sum_sq, std::size_t n, Point a, Point b) {
  return kernel_eval(KernelKind::kCalWinf, a, b) +
         sum_sq / static_cast<double>(n) * kernel_eval(KernelKind::kTiedDownWinf, a, b);
}

double dirichlet_marginal_moment(double beta_prime, std::size_t n, int k) {
  require(beta_prime > 0.0, ErrorCode::kDomain, "beta' must be positive");
  const double nb = static_cast<double>(n) * beta_prime;
  double v = 1.0;
  for (int r = 0; r < k; ++r) v *= (beta_prime + r) / (nb + r);
  return v;
}

double dirichlet_block_factor(double beta_prime, std::size_t n) {
  require(beta_prime > 0.0, ErrorCode::kDomain, "beta' must be positive");
  const double nn = static_cast<double>(n);
  return nn / (nn * beta_prime + 1.0);
}

}  // namespace bridgetrunc
