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

#ifndef BRIDGETRUNC_GRID_HPP_
#define BRIDGETRUNC_GRID_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bridgetrunc/error.hpp"

namespace bridgetrunc {

// A location in [0,1]^2. One-parameter processes ignore t.
struct Point {
  double s = 0.0;
  double t = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

// Levels s_k = k/m, k = 0..m.
class Grid {
 public:
  explicit Grid(std::size_t m) : m_(m) {
    require(m >= 1, ErrorCode::kInvalidSize, "grid resolution m must be at least 1");
  }

  std::size_t m() const noexcept { return m_; }
  std::size_t size() const noexcept { return m_ + 1; }
  double level(std::size_t k) const noexcept {
    return static_cast<double>(k) / static_cast<double>(m_);
  }
  // floor(n k / m) in exact integer arithmetic.
  std::size_t floor_index(std::size_t n, std::size_t k) const noexcept {
    return n * k / m_;
  }
  std::vector<std::size_t> floor_indices(std::size_t n) const;
  // Index k with level(k) == s (to within 1e-9), if any.
  std::optional<std::size_t> index_of(double s) const noexcept;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t m_;
};

// A two-parameter path sampled at every (s_k, t_l); row-major in k.
class GridPath2 {
 public:
  GridPath2(Grid grid, std::string statistic)
      : grid_(grid),
        statistic_(std::move(statistic)),
        values_(grid.size() * grid.size(), 0.0) {}

  const Grid& grid() const noexcept { return grid_; }
  // Raw statistic name ("T", "calT", ...) and the applied centering/scaling,
  // empty while the path is raw.
  const std::string& statistic() const noexcept { return statistic_; }
  const std::string& transform() const noexcept { return transform_; }
  void set_transform(std::string t) { transform_ = std::move(t); }
  std::string label() const { return transform_.empty() ? statistic_ : transform_; }

  double& at(std::size_t k, std::size_t l) { return values_[k * grid_.size() + l]; }
  double at(std::size_t k, std::size_t l) const { return values_[k * grid_.size() + l]; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }

 private:
  Grid grid_;
  std::string statistic_;
  std::string transform_;
  std::vector<double> values_;
};

class GridPath1 {
 public:
  GridPath1(Grid grid, std::string statistic)
      : grid_(grid), statistic_(std::move(statistic)), values_(grid.size(), 0.0) {}

  const Grid& grid() const noexcept { return grid_; }
  const std::string& statistic() const noexcept { return statistic_; }
  const std::string& transform() const noexcept { return transform_; }
  void set_transform(std::string t) { transform_ = std::move(t); }
  std::string label() const { return transform_.empty() ? statistic_ : transform_; }

  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }

 private:
  Grid grid_;
  std::string statistic_;
  std::string transform_;
  std::vector<double> values_;
};

}  // namespace bridgetrunc

#endif  // BRIDGETRUNC_GRID_HPP_
