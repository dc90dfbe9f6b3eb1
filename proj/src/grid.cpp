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

#include "bridgetrunc/grid.hpp"

#include <cmath>

namespace bridgetrunc {

std::vector<std::size_t> Grid::floor_indices(std::size_t n) const {
  std::vector<std::size_t> out(size());
  for (std::size_t k = 0; k < size(); ++k) out[k] = floor_index(n, k);
  return out;
}

std::optional<std::size_t> Grid::index_of(double s) const noexcept {
  if (!(s >= 0.0 && s <= 1.0)) return std::nullopt;
  const double scaled = s * static_cast<double>(m_);
  const double k = std::round(scaled);
  if (std::abs(scaled - k) > 1e-9 * static_cast<double>(m_)) return std::nullopt;
  return static_cast<std::size_t>(k);
}

}  // namespace bridgetrunc
