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

// Direct O(n^2 m^2) evaluations used as oracles by the tests. Nothing here
// shares code with the library.

#ifndef BRIDGETRUNC_TESTS_ORACLES_HPP_
#define BRIDGETRUNC_TESTS_ORACLES_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "bridgetrunc/ensembles.hpp"
#include "bridgetrunc/environment.hpp"
#include "bridgetrunc/grid.hpp"
#include "bridgetrunc/rng.hpp"

namespace oracle {

using bridgetrunc::Environment;
using bridgetrunc::Grid;
using bridgetrunc::GridPath2;

inline double indicator(double mark, double s) { return mark <= s ? 1.0 : 0.0; }

inline double det_truncation(const Eigen::MatrixXd& w, std::size_t p, std::size_t q) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < q; ++j) sum += w(i, j);
  return sum;
}

inline double rand_truncation(const Eigen::MatrixXd& w, const Environment& env, double s,
                              double t) {
  const std::size_t n = env.n();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      sum += w(i, j) * indicator(env.rows[i], s) * indicator(env.cols[j], t);
  return sum;
}

inline double v_process(const Eigen::MatrixXd& w, const Environment& env, double s, double t) {
  const std::size_t n = env.n();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      sum += (w(i, j) - 1.0 / static_cast<double>(n)) * (indicator(env.rows[i], s) - s) *
             (indicator(env.cols[j], t) - t);
  return sum;
}

inline double subordinated(const Eigen::MatrixXd& w, const Environment& env, double s,
                           double t) {
  std::size_t p = 0;
  std::size_t q = 0;
  for (double x : env.rows) p += x <= s;
  for (double x : env.cols) q += x <= t;
  return det_truncation(w, p, q);
}

inline double copula(const Environment& env, const std::vector<std::size_t>& sigma, double s,
                     double t) {
  const std::size_t n = env.n();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    sum += indicator(env.rows[i], s) * indicator(env.cols[sigma[i]], t);
  const double nn = static_cast<double>(n);
  return (sum - nn * s * t) / std::sqrt(nn);
}

template <class F>
double max_path_gap(const GridPath2& path, F&& f) {
  const Grid& g = path.grid();
  double gap = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k)
    for (std::size_t l = 0; l < g.size(); ++l)
      gap = std::max(gap, std::abs(path.at(k, l) - f(g.level(k), g.level(l))));
  return gap;
}

// A dense doubly stochastic matrix: a convex combination of a few random
// permutation matrices.
inline Eigen::MatrixXd random_doubly_stochastic(std::size_t n, bridgetrunc::RngStream& rng,
                                                int terms = 4) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  std::vector<double> coef(terms);
  double total = 0.0;
  for (auto& c : coef) total += (c = 0.1 + rng.uniform());
  for (int k = 0; k < terms; ++k) {
    std::vector<std::size_t> img(n);
    for (std::size_t i = 0; i < n; ++i) img[i] = i;
    std::shuffle(img.begin(), img.end(), rng);
    for (std::size_t i = 0; i < n; ++i) w(i, img[i]) += coef[k] / total;
  }
  return w;
}

inline Environment random_environment(std::size_t n, bridgetrunc::RngStream& rng) {
  Environment env;
  for (std::size_t i = 0; i < n; ++i) env.rows.push_back(rng.uniform());
  for (std::size_t i = 0; i < n; ++i) env.cols.push_back(rng.uniform());
  return env;
}

}  // namespace oracle

#endif  // BRIDGETRUNC_TESTS_ORACLES_HPP_
