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

#include "bridgetrunc/limits.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bridgetrunc/error.hpp"

namespace bridgetrunc {
namespace {

void check_unit(Point p) {
  if (!(p.s >= 0.0 && p.s <= 1.0 && p.t >= 0.0 && p.t <= 1.0)) {
    fail(ErrorCode::kDomain, "kernel coordinates must lie in [0,1]");
  }
}

double b0(double s, double s2) { return std::min(s, s2) - s * s2; }

}  // namespace

const char* kernel_name(KernelKind kind) noexcept {
  switch (kind) {
    case KernelKind::kBridgeB0: return "B0";
    case KernelKind::kBivariateB00: return "B00";
    case KernelKind::kTiedDownWinf: return "Winf";
    case KernelKind::kCalWinf: return "calWinf";
    case KernelKind::kTensorB0B0: return "B0xB0";
  }
  return "?";
}

KernelKind parse_kernel(std::string_view name) {
  for (auto k : {KernelKind::kBridgeB0, KernelKind::kBivariateB00, KernelKind::kTiedDownWinf,
                 KernelKind::kCalWinf, KernelKind::kTensorB0B0}) {
    if (name == kernel_name(k)) return k;
  }
  fail(ErrorCode::kConfig, "unknown kernel '" + std::string(name) + "'");
}

bool is_one_parameter(KernelKind kind) noexcept { return kind == KernelKind::kBridgeB0; }

double kernel_eval(KernelKind kind, Point p, Point q) {
  check_unit(p);
  check_unit(q);
  const double ss = p.s * q.s;
  const double tt = p.t * q.t;
  const double smin = std::min(p.s, q.s);
  const double tmin = std::min(p.t, q.t);
  switch (kind) {
    case KernelKind::kBridgeB0: return b0(p.s, q.s);
    case KernelKind::kBivariateB00: return smin * tmin - ss * tt;
    case KernelKind::kTiedDownWinf:
    case KernelKind::kTensorB0B0: return b0(p.s, q.s) * b0(p.t, q.t);
    case KernelKind::kCalWinf: return ss * tmin + smin * tt - 2.0 * ss * tt;
  }
  return 0.0;
}

double kernel_eval(const Kernel& kernel, Point p, Point q) {
  if (!(kernel.prefactor > 0.0)) fail(ErrorCode::kDomain, "kernel prefactor must be positive");
  return kernel.prefactor * kernel_eval(kernel.kind, p, q);
}

double kernel_identity_residual(Point p, Point q) {
  return kernel_eval(KernelKind::kBivariateB00, p, q) -
         (kernel_eval(KernelKind::kTiedDownWinf, p, q) + kernel_eval(KernelKind::kCalWinf, p, q));
}

LimitSampler::LimitSampler(Kernel kernel, Grid grid, SamplerMethod method)
    : kernel_(kernel), grid_(grid), method_(method) {
  if (!(kernel_.prefactor > 0.0)) fail(ErrorCode::kDomain, "kernel prefactor must be positive");
  if (method_ != SamplerMethod::kCholeskyOnGrid) return;

  const std::size_t g = grid_.size();
  const bool one = is_one_parameter(kernel_.kind);
  const std::size_t total = one ? g : g * g;
  auto point = [&](std::size_t idx) {
    return one ? Point{grid_.level(idx), 0.0} : Point{grid_.level(idx / g), grid_.level(idx % g)};
  };
  for (std::size_t idx = 0; idx < total; ++idx) {
    const Point p = point(idx);
    if (kernel_eval(kernel_.kind, p, p) > 0.0) active_.push_back(idx);
  }
  const auto d = static_cast<Eigen::Index>(active_.size());
  Eigen::MatrixXd cov(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b <= a; ++b) {
      const double v = kernel_eval(kernel_, point(active_[static_cast<std::size_t>(a)]),
                                   point(active_[static_cast<std::size_t>(b)]));
      cov(a, b) = v;
      cov(b, a) = v;
    }
    cov(a, a) += kCholeskyJitter;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    fail(ErrorCode::kNumerical, std::string("covariance of ") + kernel_name(kernel_.kind) +
                                   " is not positive definite on the grid");
  }
  factor_ = llt.matrixL();
}

std::vector<double> LimitSampler::bridge(RngStream& rng) const {
  const std::size_t m = grid_.m();
  const double sd = 1.0 / std::sqrt(static_cast<double>(m));
  std::vector<double> w(m + 1, 0.0);
  for (std::size_t k = 1; k <= m; ++k) w[k] = w[k - 1] + sd * rng.normal();
  const double end = w[m];
  for (std::size_t k = 0; k <= m; ++k) w[k] -= grid_.level(k) * end;
  w[m] = 0.0;
  return w;
}

// Brownian sheet on the grid, row-major (m+1)^2.
std::vector<double> LimitSampler::sheet(RngStream& rng) const {
  const std::size_t g = grid_.size();
  const double sd = 1.0 / static_cast<double>(grid_.m());
  std::vector<double> w(g * g, 0.0);
  for (std::size_t k = 1; k < g; ++k) {
    double row = 0.0;
    for (std::size_t l = 1; l < g; ++l) {
      row += sd * rng.normal();
      w[k * g + l] = w[(k - 1) * g + l] + row;
    }
  }
  return w;
}

std::vector<double> LimitSampler::cholesky_draw(RngStream& rng) const {
  const auto d = factor_.rows();
  Eigen::VectorXd z(d);
  for (Eigen::Index a = 0; a < d; ++a) z(a) = rng.normal();
  const Eigen::VectorXd x = factor_.triangularView<Eigen::Lower>() * z;
  const std::size_t g = grid_.size();
  std::vector<double> out(is_one_parameter(kernel_.kind) ? g : g * g, 0.0);
  for (Eigen::Index a = 0; a < d; ++a) out[active_[static_cast<std::size_t>(a)]] = x(a);
  return out;
}

GridPath1 LimitSampler::sample1(RngStream& rng) const {
  if (!is_one_parameter(kernel_.kind)) {
    fail(ErrorCode::kContract, "sample1 needs a one-parameter kernel");
  }
  GridPath1 path(grid_, kernel_name(kernel_.kind));
  if (method_ == SamplerMethod::kCholeskyOnGrid) {
    path.values() = cholesky_draw(rng);
    return path;
  }
  const double scale = std::sqrt(kernel_.prefactor);
  const auto b = bridge(rng);
  for (std::size_t k = 0; k < grid_.size(); ++k) path[k] = scale * b[k];
  return path;
}

GridPath2 LimitSampler::sample2(RngStream& rng) const {
  if (is_one_parameter(kernel_.kind)) {
    fail(ErrorCode::kContract, "sample2 needs a two-parameter kernel");
  }
  GridPath2 path(grid_, kernel_name(kernel_.kind));
  if (method_ == SamplerMethod::kCholeskyOnGrid) {
    path.values() = cholesky_draw(rng);
    return path;
  }
  const std::size_t g = grid_.size();
  const double scale = std::sqrt(kernel_.prefactor);
  switch (kernel_.kind) {
    case KernelKind::kCalWinf:
    case KernelKind::kTensorB0B0: {
      const auto b1 = bridge(rng);
      const auto b2 = bridge(rng);
      const bool tensor = kernel_.kind == KernelKind::kTensorB0B0;
      for (std::size_t k = 0; k < g; ++k) {
        for (std::size_t l = 0; l < g; ++l) {
          const double v = tensor ? b1[k] * b2[l]
                                  : grid_.level(k) * b1[l] + grid_.level(l) * b2[k];
          path.at(k, l) = scale * v;
        }
      }
      break;
    }
    case KernelKind::kBivariateB00:
    case KernelKind::kTiedDownWinf: {
      const auto w = sheet(rng);
      const std::size_t m = grid_.m();
      const double corner = w[m * g + m];
      const bool pinned = kernel_.kind == KernelKind::kTiedDownWinf;
      for (std::size_t k = 0; k < g; ++k) {
        for (std::size_t l = 0; l < g; ++l) {
          const double s = grid_.level(k);
          const double t = grid_.level(l);
          const double v = pinned ? w[k * g + l] - s * w[m * g + l] - t * w[k * g + m] +
                                        s * t * corner
                                  : w[k * g + l] - s * t * corner;
          path.at(k, l) = scale * v;
        }
      }
      break;
    }
    case KernelKind::kBridgeB0: break;
  }
  return path;
}

}  // namespace bridgetrunc
