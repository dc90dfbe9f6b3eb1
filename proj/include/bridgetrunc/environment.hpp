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

#ifndef BRIDGETRUNC_ENVIRONMENT_HPP_
#define BRIDGETRUNC_ENVIRONMENT_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "bridgetrunc/rng.hpp"

namespace bridgetrunc {

class Grid;

// Row marks R_1..R_n and column marks C_1..C_n, i.i.d. uniform on [0,1].
// Row i is kept by the truncation at level s iff R_i <= s.
struct Environment {
  std::vector<double> rows;
  std::vector<double> cols;

  std::size_t n() const noexcept { return rows.size(); }
};

Environment sample_environment(std::size_t n, RngStream& rng);

// S_s = #{i : marks_i <= s}.
std::size_t counting(std::span<const double> marks, double s);
// n^{-1/2} (S_s - n s).
double normalized_counting(std::span<const double> marks, double s);

// Exact Var(S_s S'_t / n) for independent Binomial(n,s), Binomial(n,t):
//   n (s^2 t(1-t) + t^2 s(1-s)) + s t (1-s)(1-t).
double product_count_variance(std::size_t n, double s, double t);

// One sorted axis of an environment. order()[r] is the original index of the
// r-th smallest mark, i.e. sigma^{-1}(r); rank()[i] is sigma(i). Ties are
// broken by index.
class SortedMarks {
 public:
  explicit SortedMarks(std::span<const double> marks);

  std::size_t size() const noexcept { return sorted_.size(); }
  const std::vector<double>& sorted() const noexcept { return sorted_; }
  const std::vector<std::size_t>& order() const noexcept { return order_; }
  const std::vector<std::size_t>& rank() const noexcept { return rank_; }

  // S_s in O(log n).
  std::size_t count(double s) const;
  // S_{s_k} for every grid level, nondecreasing in k.
  std::vector<std::size_t> counts(const Grid& grid) const;

 private:
  std::vector<double> sorted_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> rank_;
};

struct SortedEnvironment {
  explicit SortedEnvironment(const Environment& env)
      : rows(env.rows), cols(env.cols) {}

  std::size_t n() const noexcept { return rows.size(); }

  SortedMarks rows;
  SortedMarks cols;
};

}  // namespace bridgetrunc

#endif  // BRIDGETRUNC_ENVIRONMENT_HPP_
