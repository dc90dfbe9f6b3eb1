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

#include "bridgetrunc/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bridgetrunc/error.hpp"
#include "bridgetrunc/grid.hpp"

namespace bridgetrunc {
namespace {

void require_level(double s) {
  if (!(s >= 0.0 && s <= 1.0)) fail(ErrorCode::kDomain, "level must lie in [0,1]");
}

}  // namespace

Environment sample_environment(std::size_t n, RngStream& rng) {
  if (n == 0) fail(ErrorCode::kInvalidSize, "environment size must be at least 1");
  Environment env;
  env.rows.resize(n);
  env.cols.resize(n);
  for (auto& r : env.rows) r = rng.uniform();
  for (auto& c : env.cols) c = rng.uniform();
  return env;
}

std::size_t counting(std::span<const double> marks, double s) {
  require_level(s);
  return static_cast<std::size_t>(
      std::count_if(marks.begin(), marks.end(), [s](double r) { return r <= s; }));
}

double normalized_counting(std::span<const double> marks, double s) {
  const double n = static_cast<double>(marks.size());
  return (static_cast<double>(counting(marks, s)) - n * s) / std::sqrt(n);
}

double product_count_variance(std::size_t n, double s, double t) {
  require_level(s);
  require_level(t);
  const double nn = static_cast<double>(n);
  return nn * (s * s * t * (1.0 - t) + t * t * s * (1.0 - s)) +
         s * t * (1.0 - s) * (1.0 - t);
}

SortedMarks::SortedMarks(std::span<const double> marks)
    : order_(marks.size()), rank_(marks.size()) {
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(),
                   [&](std::size_t a, std::size_t b) { return marks[a] < marks[b]; });
  sorted_.resize(marks.size());
  for (std::size_t r = 0; r < order_.size(); ++r) {
    sorted_[r] = marks[order_[r]];
    rank_[order_[r]] = r;
  }
}

std::size_t SortedMarks::count(double s) const {
  require_level(s);
  return static_cast<std::size_t>(
      std::upper_bound(sorted_.begin(), sorted_.end(), s) - sorted_.begin());
}

std::vector<std::size_t> SortedMarks::counts(const Grid& grid) const {
  std::vector<std::size_t> out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) out[k] = count(grid.level(k));
  return out;
}

}  // namespace bridgetrunc
