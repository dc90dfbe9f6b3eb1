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

#ifndef BRIDGETRUNC_RNG_HPP_
#define BRIDGETRUNC_RNG_HPP_

#include <cstdint>
#include <random>

namespace bridgetrunc {

// Independent sub-streams derived from one master seed. A stream is a pure
// function of (seed, tag, index), so replicate k draws the same numbers no
// matter which thread runs it.
enum class StreamTag : std::uint64_t {
  kMatrix = 1,
  kEnvironment = 2,
  kFixed = 3,
  kAuxiliary = 4,
  kSecondMatrix = 5,
  kLimit = 6,
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

class RngStream {
 public:
  using engine_type = std::mt19937_64;
  using result_type = engine_type::result_type;

  explicit RngStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  static RngStream derive(std::uint64_t master_seed, StreamTag tag,
                          std::uint64_t index) noexcept;

  static constexpr result_type min() { return engine_type::min(); }
  static constexpr result_type max() { return engine_type::max(); }
  result_type operator()() { return engine_(); }

  // Uniform on [0, 1).
  double uniform() {
    return std::generate_canonical<double, 64>(engine_);
  }
  double normal() { return normal_(engine_); }

 private:
  engine_type engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace bridgetrunc

#endif  // BRIDGETRUNC_RNG_HPP_
