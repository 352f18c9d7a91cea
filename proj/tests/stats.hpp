// Copyright 2026 The rydhm Authors
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

// Statistical helpers shared by the stochastic tests.

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace rydhm::testing {

// Upper 1% point of the chi-square distribution (Wilson-Hilferty).
inline double chi_square_critical_99(int dof) {
  const double z = 2.3263478740408408;
  const double k = static_cast<double>(dof);
  const double t = 1.0 - 2.0 / (9.0 * k) + z * std::sqrt(2.0 / (9.0 * k));
  return k * t * t * t;
}

// Pearson statistic of observed counts against expected probabilities;
// outcomes with zero expectation must not be observed.
inline double chi_square(const std::vector<std::uint64_t>& observed,
                         const std::vector<double>& expected_p, int& dof) {
  double total = 0.0;
  for (auto c : observed) total += static_cast<double>(c);
  double stat = 0.0;
  dof = -1;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = expected_p[i] * total;
    if (e <= 0.0) {
      if (observed[i] != 0) return INFINITY;
      continue;
    }
    const double d = static_cast<double>(observed[i]) - e;
    stat += d * d / e;
    ++dof;
  }
  return stat;
}

inline bool passes_chi_square(const std::vector<std::uint64_t>& observed,
                              const std::vector<double>& expected_p) {
  int dof = 0;
  const double stat = chi_square(observed, expected_p, dof);
  return dof < 1 ? stat == 0.0 : stat < chi_square_critical_99(dof);
}

}  // namespace rydhm::testing
