// Copyright 2026 The Quixer Simulator Authors
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

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "quixer/model.hpp"

namespace testing {

using quixer::complex_t;
using quixer::StateVector;

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline StateVector random_state(std::mt19937_64& rng, int q) {
  std::normal_distribution<double> normal;
  StateVector s(q);
  double n2 = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    s[i] = {normal(rng), normal(rng)};
    n2 += std::norm(s[i]);
  }
  for (std::size_t i = 0; i < s.dim(); ++i) s[i] /= std::sqrt(n2);
  return s;
}

inline std::vector<double> random_angles(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> out(n);
  for (double& v : out) v = uniform(rng, -std::numbers::pi, std::numbers::pi);
  return out;
}

inline double max_diff(const StateVector& a, const StateVector& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

/// 2x2 matrix row-major.
using Mat2 = std::array<complex_t, 4>;

inline Mat2 rotation(char axis, double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  const complex_t i{0.0, 1.0};
  switch (axis) {
    case 'X': return {c, -i * s, -i * s, c};
    case 'Y': return {c, -s, s, c};
    default: return {std::exp(-i * theta / 2.0), 0.0, 0.0, std::exp(i * theta / 2.0)};
  }
}

/// Applies `m` to `target`, only on basis states whose `control` bit is set
/// (control < 0 means unconditional). Written as a plain loop over indices.
inline StateVector apply_1q(const StateVector& s, const Mat2& m, int target, int control = -1) {
  StateVector out = s;
  const std::size_t bit = std::size_t{1} << target;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if (i & bit) continue;
    if (control >= 0 && !(i & (std::size_t{1} << control))) continue;
    const complex_t a0 = s[i], a1 = s[i | bit];
    out[i] = m[0] * a0 + m[1] * a1;
    out[i | bit] = m[2] * a0 + m[3] * a1;
  }
  return out;
}

}  // namespace testing
