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

#ifndef BRIDGETRUNC_KS_HPP_
#define BRIDGETRUNC_KS_HPP_

#include <span>

namespace bridgetrunc {

struct KsResult {
  double statistic = 0.0;  // sup |F_a - F_b|
  double p_value = 1.0;
};

// Asymptotic Kolmogorov distribution, P(K > lambda).
double kolmogorov_survival(double lambda);

// Two-sample test with the Stephens small-sample correction of lambda.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

}  // namespace bridgetrunc

#endif  // BRIDGETRUNC_KS_HPP_
