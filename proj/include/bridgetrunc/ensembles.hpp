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

#ifndef BRIDGETRUNC_ENSEMBLES_HPP_
#define BRIDGETRUNC_ENSEMBLES_HPP_

#include <complex>
#include <cstddef>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "bridgetrunc/rng.hpp"

namespace bridgetrunc {

inline constexpr double kUnitarityTolerance = 1e-10;
inline constexpr double kStochasticTolerance = 1e-12;

enum class EnsembleKind { kHaarUnitary, kHaarOrthogonal, kDft, kPermutation };

// CLI spellings: "unitary", "orthogonal", "dft", "permutation".
const char* ensemble_name(EnsembleKind kind) noexcept;
EnsembleKind parse_ensemble(std::string_view name);

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::kHaarUnitary;
  std::size_t n = 1;

  // 1 for unitary, 1/2 for orthogonal, absent for DFT and permutations.
  std::optional<double> beta_prime() const noexcept;
  bool is_haar() const noexcept {
    return kind == EnsembleKind::kHaarUnitary ||
           kind == EnsembleKind::kHaarOrthogonal;
  }
};

// A permutation of {0, ..., n-1}; image()[i] is sigma(i).
class Permutation {
 public:
  explicit Permutation(std::vector<std::size_t> image);
  static Permutation identity(std::size_t n);

  std::size_t size() const noexcept { return image_.size(); }
  std::size_t operator[](std::size_t i) const { return image_[i]; }
  const std::vector<std::size_t>& image() const noexcept { return image_; }
  Permutation inverse() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> image_;
};

// A sampled matrix. Orthogonal draws are stored real, permutations as index
// arrays; nothing in this project ever densifies a permutation on its own.
class GenericMatrix {
 public:
  using Complex = Eigen::MatrixXcd;
  using Real = Eigen::MatrixXd;

  GenericMatrix(EnsembleKind kind, Complex m);
  GenericMatrix(EnsembleKind kind, Real m);
  explicit GenericMatrix(Permutation p);

  EnsembleKind kind() const noexcept { return kind_; }
  std::size_t n() const noexcept;
  std::complex<double> entry(std::size_t i, std::size_t j) const;

  bool is_permutation() const noexcept {
    return std::holds_alternative<Permutation>(data_);
  }
  const Permutation& permutation() const { return std::get<Permutation>(data_); }
  const std::variant<Complex, Real, Permutation>& data() const noexcept {
    return data_;
  }

  // max |(M* M - I)_ij|; exactly 0 for permutations.
  double unitarity_defect() const;

 private:
  EnsembleKind kind_;
  std::variant<Complex, Real, Permutation> data_;
};

// w_ij = |U_ij|^2. Dense for Haar and DFT, sparse for permutations.
class WeightMatrix {
 public:
  explicit WeightMatrix(Eigen::MatrixXd w);
  explicit WeightMatrix(Permutation p);

  std::size_t n() const noexcept;
  bool is_permutation() const noexcept {
    return std::holds_alternative<Permutation>(data_);
  }
  const Eigen::MatrixXd& dense() const { return std::get<Eigen::MatrixXd>(data_); }
  const Permutation& permutation() const { return std::get<Permutation>(data_); }

  double operator()(std::size_t i, std::size_t j) const;
  double row_sum(std::size_t i) const;
  double col_sum(std::size_t j) const;
  // Largest deviation of a row or column sum from 1.
  double stochastic_defect() const;
  double sum_of_squares() const;
  Eigen::MatrixXd to_dense() const;

 private:
  std::variant<Eigen::MatrixXd, Permutation> data_;
};

enum class UnitarityCheck {
  kFull,        // O(n^3) check of M* M = I
  kStochastic,  // O(n^2) check of the weight row and column sums
};

// Gaussian fill, Householder QR, then Q <- Q diag(R_jj / |R_jj|).
GenericMatrix sample_haar(const EnsembleSpec& spec, RngStream& rng);
GenericMatrix dft_matrix(std::size_t n);
GenericMatrix sample_permutation(std::size_t n, RngStream& rng);
GenericMatrix sample_matrix(const EnsembleSpec& spec, RngStream& rng);

WeightMatrix squared_moduli(const GenericMatrix& m,
                            UnitarityCheck check = UnitarityCheck::kFull);

// Dirichlet(beta', ..., beta') through normalized Gamma(beta', 1) draws; the
// law of (|U_i1|^2)_i under Haar measure.
std::vector<double> sample_first_column_weights(std::size_t n,
                                                double beta_prime,
                                                RngStream& rng);

}  // namespace bridgetrunc

#endif  // BRIDGETRUNC_ENSEMBLES_HPP_
