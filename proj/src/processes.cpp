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

#include "bridgetrunc/processes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bridgetrunc/error.hpp"

namespace bridgetrunc {
namespace {

// Column-major (n+1)^2 cumulative sums of weight(i, j).
template <class Weight>
PrefixGrid build_prefix(std::size_t n, Weight&& weight) {
  const std::size_t stride = n + 1;
  std::vector<double> k(stride * stride, 0.0);
  if (n <= kKahanThreshold) {
    for (std::size_t q = 1; q <= n; ++q) {
      double column = 0.0;
      const double* left = &k[(q - 1) * stride];
      double* out = &k[q * stride];
      for (std::size_t p = 1; p <= n; ++p) {
        column += weight(p - 1, q - 1);
        out[p] = left[p] + column;
      }
    }
    return PrefixGrid(n, std::move(k));
  }
  // Kahan: one compensation term for the running column sum and one per row
  // for the accumulation across columns.
  std::vector<double> comp(stride, 0.0);
  for (std::size_t q = 1; q <= n; ++q) {
    double column = 0.0;
    double column_comp = 0.0;
    const double* left = &k[(q - 1) * stride];
    double* out = &k[q * stride];
    for (std::size_t p = 1; p <= n; ++p) {
      const double y = weight(p - 1, q - 1) - column_comp;
      const double t = column + y;
      column_comp = (t - column) - y;
      column = t;

      const double y2 = column - comp[p];
      const double t2 = left[p] + y2;
      comp[p] = (t2 - left[p]) - y2;
      out[p] = t2;
    }
  }
  return PrefixGrid(n, std::move(k));
}

// bin[i] = min{k : thresholds[k] > i}, or m + 1 when index i is never
// included; thresholds must be nondecreasing.
std::vector<std::size_t> bins_from_thresholds(std::span<const std::size_t> thresholds,
                                              std::size_t n) {
  const std::size_t never = thresholds.size();
  std::vector<std::size_t> bin(n, never);
  std::size_t filled = 0;
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    const std::size_t upto = std::min(thresholds[k], n);
    for (; filled < upto; ++filled) bin[filled] = k;
  }
  return bin;
}

std::vector<std::size_t> bins_from_marks(std::span<const double> marks, const Grid& grid) {
  std::vector<std::size_t> bin(marks.size());
  for (std::size_t i = 0; i < marks.size(); ++i) bin[i] = level_bin(marks[i], grid);
  return bin;
}

// counts(k, l) = #{i : row_bin[i] <= k, col_bin[sigma(i)] <= l}, O(n + m^2).
GridPath2 permutation_counts(std::span<const std::size_t> row_bin,
                             std::span<const std::size_t> col_bin,
                             const Permutation& sigma, const Grid& grid,
                             const char* name) {
  const std::size_t g = grid.size();
  std::vector<double> hist(g * g, 0.0);
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const std::size_t a = row_bin[i];
    const std::size_t b = col_bin[sigma[i]];
    if (a < g && b < g) hist[a * g + b] += 1.0;
  }
  GridPath2 path(grid, name);
  for (std::size_t k = 0; k < g; ++k) {
    double row = 0.0;
    for (std::size_t l = 0; l < g; ++l) {
      row += hist[k * g + l];
      path.at(k, l) = row + (k > 0 ? path.at(k - 1, l) : 0.0);
    }
  }
  return path;
}

void require_same_size(const WeightMatrix& w, const SortedEnvironment& env) {
  if (w.n() != env.n()) {
    fail(ErrorCode::kContract, "weight matrix and environment sizes differ");
  }
}

GridPath2 read_prefix(const PrefixGrid& k, std::span<const std::size_t> rows,
                      std::span<const std::size_t> cols, const Grid& grid,
                      const char* name) {
  GridPath2 path(grid, name);
  for (std::size_t a = 0; a < grid.size(); ++a) {
    for (std::size_t b = 0; b < grid.size(); ++b) path.at(a, b) = k.at(rows[a], cols[b]);
  }
  return path;
}

std::string scale_prefix(Scale scale) {
  switch (scale) {
    case Scale::kOne: return "";
    case Scale::kRootN: return "n^{1/2}";
    case Scale::kInvRootN: return "n^{-1/2}";
  }
  return "";
}

double scale_factor(Scale scale, std::size_t n) {
  const double nn = static_cast<double>(n);
  switch (scale) {
    case Scale::kOne: return 1.0;
    case Scale::kRootN: return std::sqrt(nn);
    case Scale::kInvRootN: return 1.0 / std::sqrt(nn);
  }
  return 1.0;
}

std::string compose_label(const std::string& stat, const char* centre, Scale scale) {
  std::string body = centre ? "(" + stat + " - " + centre + ")" : stat;
  const std::string prefix = scale_prefix(scale);
  if (prefix.empty()) return body;
  return prefix + (centre ? body : "(" + body + ")");
}

void check_context(Centering centering, const CenteringContext& ctx) {
  if (ctx.n == 0) fail(ErrorCode::kContract, "centering needs the matrix size n");
  if (centering == Centering::kConditionalMean &&
      (ctx.env == nullptr || ctx.env->n() != ctx.n)) {
    fail(ErrorCode::kContract, "conditional centering needs the environment");
  }
}

}  // namespace

std::size_t level_bin(double mark, const Grid& grid) noexcept {
  const std::size_t m = grid.m();
  double guess = std::ceil(mark * static_cast<double>(m));
  if (!(guess >= 0.0)) guess = 0.0;
  std::size_t k = std::min(static_cast<std::size_t>(guess), m);
  while (k > 0 && mark <= grid.level(k - 1)) --k;
  while (k <= m && mark > grid.level(k)) ++k;
  return k;
}

PrefixGrid prefix_grid(const WeightMatrix& w) {
  if (w.is_permutation()) {
    const auto& sigma = w.permutation();
    return build_prefix(w.n(), [&](std::size_t i, std::size_t j) {
      return sigma[i] == j ? 1.0 : 0.0;
    });
  }
  const auto& d = w.dense();
  return build_prefix(w.n(), [&](std::size_t i, std::size_t j) {
    return d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  });
}

GridPath2 det_truncation_path(const PrefixGrid& k, const Grid& grid) {
  const auto idx = grid.floor_indices(k.n());
  return read_prefix(k, idx, idx, grid, stat_name::kDetTruncation);
}

GridPath2 det_truncation_path(const WeightMatrix& w, const Grid& grid) {
  if (w.is_permutation()) {
    const auto idx = grid.floor_indices(w.n());
    const auto bins = bins_from_thresholds(idx, w.n());
    return permutation_counts(bins, bins, w.permutation(), grid,
                              stat_name::kDetTruncation);
  }
  return det_truncation_path(prefix_grid(w), grid);
}

GridPath2 rand_truncation_path(const WeightMatrix& w, const SortedEnvironment& env,
                               const Grid& grid) {
  require_same_size(w, env);
  if (w.is_permutation()) {
    const auto rb = bins_from_marks(env.rows.sorted(), grid);
    const auto cb = bins_from_marks(env.cols.sorted(), grid);
    // Bins of the original indices: sorted position r holds index order()[r].
    std::vector<std::size_t> row_bin(w.n()), col_bin(w.n());
    for (std::size_t r = 0; r < w.n(); ++r) {
      row_bin[env.rows.order()[r]] = rb[r];
      col_bin[env.cols.order()[r]] = cb[r];
    }
    return permutation_counts(row_bin, col_bin, w.permutation(), grid,
                              stat_name::kRandTruncation);
  }
  const auto& d = w.dense();
  const auto& ro = env.rows.order();
  const auto& co = env.cols.order();
  const PrefixGrid sorted = build_prefix(w.n(), [&](std::size_t i, std::size_t j) {
    return d(static_cast<Eigen::Index>(ro[i]), static_cast<Eigen::Index>(co[j]));
  });
  return read_prefix(sorted, env.rows.counts(grid), env.cols.counts(grid), grid,
                     stat_name::kRandTruncation);
}

GridPath2 subordinated_path(const PrefixGrid& k, const SortedEnvironment& env,
                            const Grid& grid) {
  if (k.n() != env.n()) fail(ErrorCode::kContract, "prefix grid and environment sizes differ");
  return read_prefix(k, env.rows.counts(grid), env.cols.counts(grid), grid,
                     stat_name::kSubordinated);
}

GridPath2 subordinated_path(const WeightMatrix& w, const SortedEnvironment& env,
                            const Grid& grid) {
  require_same_size(w, env);
  if (w.is_permutation()) {
    const auto rows = bins_from_thresholds(env.rows.counts(grid), w.n());
    const auto cols = bins_from_thresholds(env.cols.counts(grid), w.n());
    return permutation_counts(rows, cols, w.permutation(), grid,
                              stat_name::kSubordinated);
  }
  return subordinated_path(prefix_grid(w), env, grid);
}

VProcessRoutes v_process_routes(const WeightMatrix& w, const SortedEnvironment& env,
                                const Grid& grid) {
  require_same_size(w, env);
  const std::size_t n = w.n();
  const std::size_t g = grid.size();
  const double nn = static_cast<double>(n);
  const auto srow = env.rows.counts(grid);
  const auto scol = env.cols.counts(grid);

  GridPath2 a = rand_truncation_path(w, env, grid);
  for (std::size_t k = 0; k < g; ++k) {
    for (std::size_t l = 0; l < g; ++l) {
      a.at(k, l) -= static_cast<double>(srow[k]) * static_cast<double>(scol[l]) / nn;
    }
  }

  // Centered indicator matrices, n x (m+1), in the original index order.
  const auto ni = static_cast<Eigen::Index>(n);
  const auto gi = static_cast<Eigen::Index>(g);
  Eigen::MatrixXd rows(ni, gi), cols(ni, gi);
  for (std::size_t k = 0; k < g; ++k) {
    const double s = grid.level(k);
    for (std::size_t r = 0; r < n; ++r) {
      const auto ri = static_cast<Eigen::Index>(env.rows.order()[r]);
      const auto ci = static_cast<Eigen::Index>(env.cols.order()[r]);
      const auto kk = static_cast<Eigen::Index>(k);
      rows(ri, kk) = (env.rows.sorted()[r] <= s ? 1.0 : 0.0) - s;
      cols(ci, kk) = (env.cols.sorted()[r] <= s ? 1.0 : 0.0) - s;
    }
  }

  Eigen::MatrixXd b;
  if (w.is_permutation()) {
    const auto& sigma = w.permutation();
    Eigen::MatrixXd cols_by_sigma(ni, gi);
    for (std::size_t i = 0; i < n; ++i) {
      cols_by_sigma.row(static_cast<Eigen::Index>(i)) =
          cols.row(static_cast<Eigen::Index>(sigma[i]));
    }
    b = rows.transpose() * cols_by_sigma;
    b -= (rows.colwise().sum().transpose() * cols.colwise().sum()) / nn;
  } else {
    const Eigen::MatrixXd v = w.dense().array() - 1.0 / nn;
    b = rows.transpose() * (v * cols);
  }

  GridPath2 centered(grid, stat_name::kVProcess);
  double dev = 0.0;
  for (std::size_t k = 0; k < g; ++k) {
    for (std::size_t l = 0; l < g; ++l) {
      centered.at(k, l) = b(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
      dev = std::max(dev, std::abs(centered.at(k, l) - a.at(k, l)));
    }
  }
  GridPath2 subtraction(grid, stat_name::kVProcess);
  subtraction.values() = a.values();
  return VProcessRoutes{std::move(subtraction), std::move(centered), dev};
}

GridPath2 v_process(const WeightMatrix& w, const SortedEnvironment& env,
                    const Grid& grid) {
  auto routes = v_process_routes(w, env, grid);
  if (!(routes.max_deviation <= kRouteAgreementTolerance)) {
    fail(ErrorCode::kContract,
         "calV routes disagree by " + std::to_string(routes.max_deviation) +
             "; weight matrix is not doubly stochastic");
  }
  return std::move(routes.subtraction);
}

GridPath2 empirical_copula_path(const Environment& env, const Permutation& sigma,
                                const Grid& grid) {
  const std::size_t n = env.n();
  if (sigma.size() != n || env.cols.size() != n) {
    fail(ErrorCode::kContract, "permutation and environment sizes differ");
  }
  const auto row_bin = bins_from_marks(env.rows, grid);
  const auto col_bin = bins_from_marks(env.cols, grid);
  GridPath2 path = permutation_counts(row_bin, col_bin, sigma, grid, stat_name::kCopula);
  const double nn = static_cast<double>(n);
  const double root = std::sqrt(nn);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    for (std::size_t l = 0; l < grid.size(); ++l) {
      path.at(k, l) = (path.at(k, l) - nn * grid.level(k) * grid.level(l)) / root;
    }
  }
  return path;
}

std::pair<GridPath1, GridPath1> one_param_paths(std::span<const double> weights,
                                                const SortedMarks& rows,
                                                const Grid& grid) {
  const std::size_t n = weights.size();
  if (n == 0 || rows.size() != n) {
    fail(ErrorCode::kContract, "weight vector and marks sizes differ");
  }
  std::vector<double> in_order(n + 1, 0.0), by_mark(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    in_order[i + 1] = in_order[i] + weights[i];
    by_mark[i + 1] = by_mark[i] + weights[rows.order()[i]];
  }
  if (!(std::abs(in_order[n] - 1.0) <= 1e-10)) {
    fail(ErrorCode::kContract, "weight vector does not sum to 1 within 1e-10");
  }
  GridPath1 det(grid, stat_name::kOneParamDet);
  GridPath1 rand(grid, stat_name::kOneParamRand);
  const auto counts = rows.counts(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    det[k] = in_order[grid.floor_index(n, k)];
    rand[k] = by_mark[counts[k]];
  }
  return {std::move(det), std::move(rand)};
}

GridPath2 centered_scaled(const GridPath2& path, Centering centering, Scale scale,
                          const CenteringContext& ctx) {
  check_context(centering, ctx);
  const std::string& stat = path.statistic();
  if (!path.transform().empty() && centering != Centering::kNone) {
    fail(ErrorCode::kContract, "path " + path.label() + " is already centered");
  }
  const bool det = stat == stat_name::kDetTruncation;
  const bool rand = stat == stat_name::kRandTruncation || stat == stat_name::kSubordinated;
  const bool ok = centering == Centering::kNone ||
                  (det && centering == Centering::kDeterministicMean) ||
                  (rand && (centering == Centering::kAnnealedMean ||
                            centering == Centering::kConditionalMean));
  if (!ok) fail(ErrorCode::kContract, "centering is not defined for statistic " + stat);

  const Grid& grid = path.grid();
  const std::size_t n = ctx.n;
  const double nn = static_cast<double>(n);
  const double factor = scale_factor(scale, n);
  std::vector<std::size_t> srow, scol;
  if (centering == Centering::kConditionalMean) {
    srow = ctx.env->rows.counts(grid);
    scol = ctx.env->cols.counts(grid);
  }
  const char* centre = nullptr;
  switch (centering) {
    case Centering::kNone: break;
    case Centering::kDeterministicMean: centre = "floor(ns)floor(nt)/n"; break;
    case Centering::kAnnealedMean: centre = "n s t"; break;
    case Centering::kConditionalMean: centre = "S (x) S'/n"; break;
  }

  GridPath2 out(grid, stat);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    for (std::size_t l = 0; l < grid.size(); ++l) {
      double mean = 0.0;
      switch (centering) {
        case Centering::kNone: break;
        case Centering::kDeterministicMean:
          mean = static_cast<double>(grid.floor_index(n, k)) *
                 static_cast<double>(grid.floor_index(n, l)) / nn;
          break;
        case Centering::kAnnealedMean: mean = nn * grid.level(k) * grid.level(l); break;
        case Centering::kConditionalMean:
          mean = static_cast<double>(srow[k]) * static_cast<double>(scol[l]) / nn;
          break;
      }
      out.at(k, l) = factor * (path.at(k, l) - mean);
    }
  }
  out.set_transform(compose_label(path.label(), centre, scale));
  return out;
}

GridPath1 centered_scaled(const GridPath1& path, Centering centering, Scale scale,
                          const CenteringContext& ctx) {
  check_context(centering, ctx);
  const std::string& stat = path.statistic();
  if (!path.transform().empty() && centering != Centering::kNone) {
    fail(ErrorCode::kContract, "path " + path.label() + " is already centered");
  }
  const bool det = stat == stat_name::kOneParamDet;
  const bool rand = stat == stat_name::kOneParamRand;
  const bool ok = centering == Centering::kNone ||
                  (det && (centering == Centering::kDeterministicMean ||
                           centering == Centering::kAnnealedMean)) ||
                  (rand && (centering == Centering::kAnnealedMean ||
                            centering == Centering::kConditionalMean));
  if (!ok) fail(ErrorCode::kContract, "centering is not defined for statistic " + stat);

  const Grid& grid = path.grid();
  const std::size_t n = ctx.n;
  const double nn = static_cast<double>(n);
  const double factor = scale_factor(scale, n);
  std::vector<std::size_t> srow;
  if (centering == Centering::kConditionalMean) srow = ctx.env->rows.counts(grid);
  const char* centre = nullptr;
  switch (centering) {
    case Centering::kNone: break;
    case Centering::kDeterministicMean: centre = "floor(ns)/n"; break;
    case Centering::kAnnealedMean: centre = "I"; break;
    case Centering::kConditionalMean: centre = "S/n"; break;
  }
  GridPath1 out(grid, stat);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double mean = 0.0;
    switch (centering) {
      case Centering::kNone: break;
      case Centering::kDeterministicMean:
        mean = static_cast<double>(grid.floor_index(n, k)) / nn;
        break;
      case Centering::kAnnealedMean: mean = grid.level(k); break;
      case Centering::kConditionalMean: mean = static_cast<double>(srow[k]) / nn; break;
    }
    out[k] = factor * (path[k] - mean);
  }
  out.set_transform(compose_label(path.label(), centre, scale));
  return out;
}

}  // namespace bridgetrunc
