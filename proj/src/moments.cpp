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

#include "bridgetrunc/moments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "bridgetrunc/error.hpp"

namespace bridgetrunc {
namespace {

double pairwise(const double* x, std::size_t n) {
  if (n <= 16) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise(x, half) + pairwise(x + half, n - half);
}

std::vector<double> column(const Eigen::MatrixXd& samples, Eigen::Index j) {
  std::vector<double> out(static_cast<std::size_t>(samples.rows()));
  for (Eigen::Index r = 0; r < samples.rows(); ++r) out[static_cast<std::size_t>(r)] = samples(r, j);
  return out;
}

double mean_of(std::span<const double> x) {
  return pairwise_sum(x) / static_cast<double>(x.size());
}

// Unbiased covariance of (x, y) and the delete-one jackknife standard error.
Estimate jackknife_covariance(std::span<const double> dx, std::span<const double> dy) {
  const std::size_t n = dx.size();
  const double nn = static_cast<double>(n);
  std::vector<double> prod(n);
  for (std::size_t i = 0; i < n; ++i) prod[i] = dx[i] * dy[i];
  const double total = pairwise_sum(prod);
  Estimate e;
  e.value = total / (nn - 1.0);
  if (n < 3) {
    e.degenerate = true;
    return e;
  }
  const double pbar = total / nn;
  for (auto& p : prod) p = (p - pbar) * (p - pbar);
  const double ss = pairwise_sum(prod);
  e.se = std::sqrt(nn * ss / ((nn - 1.0) * (nn - 2.0) * (nn - 2.0)));
  e.degenerate = !(e.se > 0.0);
  return e;
}

Estimate batch_covariance(std::span<const double> x, std::span<const double> y,
                          double full_value, std::size_t batches) {
  const std::size_t size = x.size() / batches;
  std::vector<double> covs(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    const auto xs = x.subspan(b * size, size);
    const auto ys = y.subspan(b * size, size);
    const double mx = mean_of(xs);
    const double my = mean_of(ys);
    std::vector<double> prod(size);
    for (std::size_t i = 0; i < size; ++i) prod[i] = (xs[i] - mx) * (ys[i] - my);
    covs[b] = pairwise_sum(prod) / static_cast<double>(size - 1);
  }
  const double cm = mean_of(covs);
  for (auto& c : covs) c = (c - cm) * (c - cm);
  const double bb = static_cast<double>(batches);
  Estimate e;
  e.value = full_value;
  e.se = std::sqrt(pairwise_sum(covs) / (bb - 1.0) / bb);
  e.degenerate = !(e.se > 0.0);
  return e;
}

std::string describe(Point p, Point q) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%g,%g)x(%g,%g)", p.s, p.t, q.s, q.t);
  return buf;
}

}  // namespace

const char* se_method_name(SeMethod method) noexcept {
  return method == SeMethod::kJackknife ? "jackknife" : "batch-means";
}

SeMethod parse_se_method(std::string_view name) {
  if (name == "jackknife") return SeMethod::kJackknife;
  if (name == "batch-means") return SeMethod::kBatchMeans;
  fail(ErrorCode::kConfig, "unknown se method '" + std::string(name) + "'");
}

double pairwise_sum(std::span<const double> x) { return pairwise(x.data(), x.size()); }

bool EmpiricalMoments::any_degenerate() const noexcept {
  auto deg = [](const Estimate& e) { return e.degenerate; };
  return std::any_of(means.begin(), means.end(), deg) ||
         std::any_of(covariances.begin(), covariances.end(), deg);
}

Estimate sample_mean(std::span<const double> x) {
  require(!x.empty(), ErrorCode::kContract, "sample is empty");
  Estimate e;
  e.value = mean_of(x);
  if (x.size() < 2) {
    e.degenerate = true;
    return e;
  }
  std::vector<double> sq(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) sq[i] = (x[i] - e.value) * (x[i] - e.value);
  const double nn = static_cast<double>(x.size());
  e.se = std::sqrt(pairwise_sum(sq) / (nn - 1.0) / nn);
  e.degenerate = !(e.se > 0.0);
  return e;
}

Estimate standardized_fourth_moment(std::span<const double> x) {
  require(x.size() >= 4, ErrorCode::kContract, "fourth moment needs at least 4 samples");
  const double mu = mean_of(x);
  const std::size_t n = x.size();
  std::vector<double> d2(n), d4(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - mu;
    d2[i] = d * d;
    d4[i] = d2[i] * d2[i];
  }
  const double nn = static_cast<double>(n);
  const double m2 = pairwise_sum(d2) / nn;
  const double m4 = pairwise_sum(d4) / nn;
  Estimate e;
  if (!(m2 > 0.0)) {
    e.degenerate = true;
    return e;
  }
  e.value = m4 / (m2 * m2);
  // Delta method: kurt = m4/m2^2, gradient (1/m2^2, -2 m4/m2^3).
  std::vector<double> infl(n);
  for (std::size_t i = 0; i < n; ++i) {
    infl[i] = (d4[i] - m4) / (m2 * m2) - 2.0 * m4 * (d2[i] - m2) / (m2 * m2 * m2);
    infl[i] *= infl[i];
  }
  e.se = std::sqrt(pairwise_sum(infl) / nn / nn);
  e.degenerate = !(e.se > 0.0);
  return e;
}

EmpiricalMoments empirical_moments(const Eigen::MatrixXd& samples, const MomentOptions& options) {
  const auto n = static_cast<std::size_t>(samples.rows());
  const auto d = static_cast<std::size_t>(samples.cols());
  require(n >= 2, ErrorCode::kContract, "empirical moments need at least 2 replicates");
  if (options.method == SeMethod::kBatchMeans) {
    require(options.batches >= 2 && n / options.batches >= 2, ErrorCode::kConfig,
            "batch means need at least 2 batches of 2 replicates");
  }
  EmpiricalMoments out;
  out.replicates = n;
  out.dim = d;
  out.method = options.method;

  std::vector<std::vector<double>> cols(d), dev(d);
  for (std::size_t j = 0; j < d; ++j) {
    cols[j] = column(samples, static_cast<Eigen::Index>(j));
    Estimate m = sample_mean(cols[j]);
    dev[j].resize(n);
    for (std::size_t i = 0; i < n; ++i) dev[j][i] = cols[j][i] - m.value;
    out.means.push_back(m);
  }
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a; b < d; ++b) {
      Estimate c = jackknife_covariance(dev[a], dev[b]);
      if (options.method == SeMethod::kBatchMeans) {
        c = batch_covariance(cols[a], cols[b], c.value, options.batches);
      }
      out.pairs.emplace_back(a, b);
      out.covariances.push_back(c);
    }
  }
  return out;
}

ZScore z_score(const Estimate& emp, double target, double threshold) {
  ZScore z;
  const double diff = emp.value - target;
  if (emp.se > 0.0) {
    z.z = diff / emp.se;
  } else if (std::abs(diff) <= 1e-12 * std::max(1.0, std::abs(target))) {
    z.z = 0.0;
  } else {
    z.z = diff > 0 ? std::numeric_limits<double>::infinity()
                   : -std::numeric_limits<double>::infinity();
  }
  z.pass = std::abs(z.z) <= threshold;
  return z;
}

KernelVerdict compare_to_kernel(const EmpiricalMoments& emp, std::span<const Point> points,
                                const Kernel& kernel, double threshold) {
  require(points.size() == emp.dim, ErrorCode::kContract,
          "point count does not match the moment dimension");
  KernelVerdict v;
  for (std::size_t i = 0; i < emp.pairs.size(); ++i) {
    const auto [a, b] = emp.pairs[i];
    KernelComparison c;
    c.p = points[a];
    c.q = points[b];
    c.emp = emp.covariances[i].value;
    c.se = emp.covariances[i].se;
    c.target = kernel_eval(kernel, c.p, c.q);
    const ZScore z = z_score(emp.covariances[i], c.target, threshold);
    c.z = z.z;
    c.pass = z.pass;
    if (v.worst.empty() || std::abs(c.z) > v.max_abs_z) {
      v.max_abs_z = std::abs(c.z);
      v.worst = describe(c.p, c.q);
    }
    v.pass = v.pass && c.pass;
    v.comparisons.push_back(c);
  }
  return v;
}

}  // namespace bridgetrunc
