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

/**
 * @file
 * Polynomial transforms P_c(M) = c_d M^d + ... + c_1 M + c_0 I of the mixer.
 *
 * Simulation evaluates P_c(M)|psi> directly by power accumulation; no phase
 * angles are synthesized. Trained coefficients are not constrained to
 * |P(x)| <= 1 on [-1, 1]; polynomial_sup_norm reports how far they stray.
 */

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "quixer/lcu.hpp"

namespace quixer {

/// Real coefficients, lowest degree first.
struct PolynomialSpec {
  std::vector<double> coefficients;

  [[nodiscard]] int degree() const noexcept {
    return static_cast<int>(coefficients.size()) - 1;
  }
  /// Throws DimensionError when the degree is below one.
  void validate() const;
  [[nodiscard]] double evaluate(double x) const;
};

/// v_0 = state, v_{k+1} = M v_k for k < d. Returns v_0..v_d.
std::vector<StateVector> mixer_powers(const BlockEncodingSpec& spec, const StateVector& state,
                                      int degree);

/// sum_k c_k v_k given the powers from mixer_powers.
StateVector combine_powers(const PolynomialSpec& poly, const std::vector<StateVector>& powers);

/// P_c(M)|state> using d applications of M.
StateVector apply_polynomial(const PolynomialSpec& poly, const BlockEncodingSpec& spec,
                             const StateVector& state);

/// (odd, even) parts, each zero-padded to the input length.
std::pair<PolynomialSpec, PolynomialSpec> parity_split(const PolynomialSpec& poly);

/// Largest n^d the skip-gram enumeration accepts.
inline constexpr std::size_t kSkipgramBudget = 100000;

/**
 * P_c(M)|state> by enumerating every ordered tuple of token indices:
 * c_0|psi> + sum_k c_k sum_alpha b_alpha1...b_alphak U_alpha1...U_alphak|psi>.
 * Throws DimensionError if any n^k exceeds kSkipgramBudget.
 */
StateVector skipgram_expansion_oracle(const PolynomialSpec& poly, const BlockEncodingSpec& spec,
                                      const StateVector& state);

/// max |P(x)| over `grid_points` uniformly spaced points of [-1, 1].
double polynomial_sup_norm(const PolynomialSpec& poly, int grid_points);

/// p = ||P_c(M)|0>||^2.
double final_postselection_prob(const PolynomialSpec& poly, const BlockEncodingSpec& spec);

}  // namespace quixer
