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

#include "bridgetrunc/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "bridgetrunc/error.hpp"

namespace bridgetrunc {
namespace {

void require_size(std::size_t n) {
  if (n == 0) fail(ErrorCode::kInvalidSize, "matrix size must be at least 1");
}

template <class M>
double max_abs_gram_defect(const M& m) {
  const auto n = m.cols();
  auto g = (m.adjoint() * m).eval();
  g.diagonal().array() -= 1.0;
  return n == 0 ? 0.0 : g.cwiseAbs().maxCoeff();
}

}  // namespace

const char* ensemble_name(EnsembleKind kind) noexcept {
  switch (kind) {
    case EnsembleKind::kHaarUnitary: return "unitary";
    case EnsembleKind::kHaarOrthogonal: return "orthogonal";
    case EnsembleKind::kDft: return "dft";
    case EnsembleKind::kPermutation: return "permutation";
  }
  return "unknown";
}

EnsembleKind parse_ensemble(std::string_view name) {
  if (name == "unitary") return EnsembleKind::kHaarUnitary;
  if (name == "orthogonal") return EnsembleKind::kHaarOrthogonal;
  if (name == "dft") return EnsembleKind::kDft;
  if (name == "permutation") return EnsembleKind::kPermutation;
  fail(ErrorCode::kConfig, "unknown ensemble '" + std::string(name) +
                               "' (expected unitary|orthogonal|dft|permutation)");
}

std::optional<double> EnsembleSpec::beta_prime() const noexcept {
  switch (kind) {
    case EnsembleKind::kHaarUnitary: return 1.0;
    case EnsembleKind::kHaarOrthogonal: return 0.5;
    default: return std::nullopt;
  }
}

Permutation::Permutation(std::vector<std::size_t> image)
    : image_(std::move(image)) {
  std::vector<bool> seen(image_.size(), false);
  for (std::size_t v : image_) {
    if (v >= image_.size() || seen[v]) {
      fail(ErrorCode::kContract, "index array is not a permutation");
    }
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> id(n);
  std::iota(id.begin(), id.end(), std::size_t{0});
  return Permutation(std::move(id));
}

Permutation Permutation::inverse() const {
  std::vector<std::size_t> inv(image_.size());
  for (std::size_t i = 0; i < image_.size(); ++i) inv[image_[i]] = i;
  return Permutation(std::move(inv));
}

GenericMatrix::GenericMatrix(EnsembleKind kind, Complex m)
    : kind_(kind), data_(std::move(m)) {}
GenericMatrix::GenericMatrix(EnsembleKind kind, Real m)
    : kind_(kind), data_(std::move(m)) {}
GenericMatrix::GenericMatrix(Permutation p)
    : kind_(EnsembleKind::kPermutation), data_(std::move(p)) {}

std::size_t GenericMatrix::n() const noexcept {
  return std::visit(
      [](const auto& d) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(d)>, Permutation>) {
          return d.size();
        } else {
          return static_cast<std::size_t>(d.rows());
        }
      },
      data_);
}

std::complex<double> GenericMatrix::entry(std::size_t i, std::size_t j) const {
  const auto ii = static_cast<Eigen::Index>(i);
  const auto jj = static_cast<Eigen::Index>(j);
  if (const auto* c = std::get_if<Complex>(&data_)) return (*c)(ii, jj);
  if (const auto* r = std::get_if<Real>(&data_)) return (*r)(ii, jj);
  return std::get<Permutation>(data_)[i] == j ? 1.0 : 0.0;
}

double GenericMatrix::unitarity_defect() const {
  if (const auto* c = std::get_if<Complex>(&data_)) return max_abs_gram_defect(*c);
  if (const auto* r = std::get_if<Real>(&data_)) return max_abs_gram_defect(*r);
  return 0.0;
}

WeightMatrix::WeightMatrix(Eigen::MatrixXd w) : data_(std::move(w)) {
  const auto& d = std::get<Eigen::MatrixXd>(data_);
  if (d.rows() != d.cols()) fail(ErrorCode::kContract, "weight matrix must be square");
  if (d.rows() == 0) fail(ErrorCode::kInvalidSize, "weight matrix is empty");
}

WeightMatrix::WeightMatrix(Permutation p) : data_(std::move(p)) {
  if (std::get<Permutation>(data_).size() == 0) {
    fail(ErrorCode::kInvalidSize, "weight matrix is empty");
  }
}

std::size_t WeightMatrix::n() const noexcept {
  if (const auto* p = std::get_if<Permutation>(&data_)) return p->size();
  return static_cast<std::size_t>(std::get<Eigen::MatrixXd>(data_).rows());
}

double WeightMatrix::operator()(std::size_t i, std::size_t j) const {
  if (const auto* p = std::get_if<Permutation>(&data_)) return (*p)[i] == j ? 1.0 : 0.0;
  return dense()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

double WeightMatrix::row_sum(std::size_t i) const {
  if (is_permutation()) return 1.0;
  return dense().row(static_cast<Eigen::Index>(i)).sum();
}

double WeightMatrix::col_sum(std::size_t j) const {
  if (is_permutation()) return 1.0;
  return dense().col(static_cast<Eigen::Index>(j)).sum();
}

double WeightMatrix::stochastic_defect() const {
  if (is_permutation()) return 0.0;
  const auto& w = dense();
  const double rows = (w.rowwise().sum().array() - 1.0).abs().maxCoeff();
  const double cols = (w.colwise().sum().array() - 1.0).abs().maxCoeff();
  return std::max(rows, cols);
}

double WeightMatrix::sum_of_squares() const {
  if (is_permutation()) return static_cast<double>(n());
  return dense().squaredNorm();
}

Eigen::MatrixXd WeightMatrix::to_dense() const {
  if (!is_permutation()) return dense();
  const auto& p = permutation();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p.size()),
                                            static_cast<Eigen::Index>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i) {
    w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p[i])) = 1.0;
  }
  return w;
}

GenericMatrix sample_haar(const EnsembleSpec& spec, RngStream& rng) {
  require_size(spec.n);
  const auto n = static_cast<Eigen::Index>(spec.n);
  if (spec.kind == EnsembleKind::kHaarUnitary) {
    const double scale = std::sqrt(0.5);
    Eigen::MatrixXcd a(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const double re = scale * rng.normal();
        const double im = scale * rng.normal();
        a(i, j) = {re, im};
      }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    Eigen::MatrixXcd q = qr.householderQ();
    const auto& r = qr.matrixQR();
    for (Eigen::Index j = 0; j < n; ++j) {
      const std::complex<double> d = r(j, j);
      const double mod = std::abs(d);
      if (mod > 0.0) q.col(j) *= d / mod;
    }
    return GenericMatrix(spec.kind, std::move(q));
  }
  if (spec.kind == EnsembleKind::kHaarOrthogonal) {
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) a(i, j) = rng.normal();
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ();
    const auto& r = qr.matrixQR();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (r(j, j) < 0.0) q.col(j) *= -1.0;
    }
    return GenericMatrix(spec.kind, std::move(q));
  }
  fail(ErrorCode::kContract, "sample_haar requires a unitary or orthogonal ensemble");
}

GenericMatrix dft_matrix(std::size_t n) {
  require_size(n);
  const auto nn = static_cast<Eigen::Index>(n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  Eigen::MatrixXcd f(nn, nn);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      // Reduce (j k) mod n first so the angle stays accurate for large n.
      const double frac = static_cast<double>((j * k) % n) / static_cast<double>(n);
      const double angle = -2.0 * std::numbers::pi * frac;
      f(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
          std::polar(norm, angle);
    }
  }
  return GenericMatrix(EnsembleKind::kDft, std::move(f));
}

GenericMatrix sample_permutation(std::size_t n, RngStream& rng) {
  require_size(n);
  std::vector<std::size_t> image(n);
  std::iota(image.begin(), image.end(), std::size_t{0});
  // Fisher-Yates.
  for (std::size_t i = n - 1; i > 0; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i);
    std::swap(image[i], image[pick(rng)]);
  }
  return GenericMatrix(Permutation(std::move(image)));
}

GenericMatrix sample_matrix(const EnsembleSpec& spec, RngStream& rng) {
  switch (spec.kind) {
    case EnsembleKind::kHaarUnitary:
    case EnsembleKind::kHaarOrthogonal: return sample_haar(spec, rng);
    case EnsembleKind::kDft: return dft_matrix(spec.n);
    case EnsembleKind::kPermutation: return sample_permutation(spec.n, rng);
  }
  fail(ErrorCode::kContract, "unknown ensemble");
}

WeightMatrix squared_moduli(const GenericMatrix& m, UnitarityCheck check) {
  if (m.is_permutation()) return WeightMatrix(m.permutation());
  if (check == UnitarityCheck::kFull && !(m.unitarity_defect() <= kUnitarityTolerance)) {
    fail(ErrorCode::kContract, "matrix is not unitary within 1e-10");
  }
  Eigen::MatrixXd w;
  if (const auto* c = std::get_if<GenericMatrix::Complex>(&m.data())) {
    w = c->cwiseAbs2();
  } else {
    w = std::get<GenericMatrix::Real>(m.data()).cwiseAbs2();
  }
  WeightMatrix out(std::move(w));
  if (check == UnitarityCheck::kStochastic &&
      !(out.stochastic_defect() <= kUnitarityTolerance)) {
    fail(ErrorCode::kContract, "squared moduli are not doubly stochastic within 1e-10");
  }
  return out;
}

std::vector<double> sample_first_column_weights(std::size_t n, double beta_prime,
                                                RngStream& rng) {
  require_size(n);
  if (!(beta_prime > 0.0)) fail(ErrorCode::kDomain, "beta' must be positive");
  std::gamma_distribution<double> gamma(beta_prime, 1.0);
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& x : w) {
    x = gamma(rng);
    total += x;
  }
  for (auto& x : w) x /= total;
  return w;
}

}  // namespace bridgetrunc
