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

#include "quixer/qsvt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "quixer/errors.hpp"

namespace quixer {

void PolynomialSpec::validate() const {
  if (coefficients.size() < 2) {
    throw DimensionError("polynomial degree must be at least 1");
  }
}

double PolynomialSpec::evaluate(double x) const {
  double acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<StateVector> mixer_powers(const BlockEncodingSpec& spec, const StateVector& state,
                                      int degree) {
  std::vector<StateVector> powers;
  powers.reserve(static_cast<std::size_t>(degree) + 1);
  powers.push_back(state);
  const auto b = effective_coefficients(spec.coeffs);
  for (int k = 0; k < degree; ++k) powers.push_back(apply_combination(b, spec, powers.back()));
  return powers;
}

StateVector combine_powers(const PolynomialSpec& poly, const std::vector<StateVector>& powers) {
  if (powers.size() != poly.coefficients.size()) {
    throw DimensionError("need one power per polynomial coefficient");
  }
  StateVector out(powers.front().num_qubits());
  for (std::size_t k = 0; k < powers.size(); ++k) {
    axpy_inplace(poly.coefficients[k], powers[k], out);
  }
  return out;
}

StateVector apply_polynomial(const PolynomialSpec& poly, const BlockEncodingSpec& spec,
                             const StateVector& state) {
  poly.validate();
  return combine_powers(poly, mixer_powers(spec, state, poly.degree()));
}

std::pair<PolynomialSpec, PolynomialSpec> parity_split(const PolynomialSpec& poly) {
  PolynomialSpec odd{std::vector<double>(poly.coefficients.size(), 0.0)};
  PolynomialSpec even{std::vector<double>(poly.coefficients.size(), 0.0)};
  for (std::size_t k = 0; k < poly.coefficients.size(); ++k) {
    (k % 2 ? odd : even).coefficients[k] = poly.coefficients[k];
  }
  return {std::move(odd), std::move(even)};
}

StateVector skipgram_expansion_oracle(const PolynomialSpec& poly, const BlockEncodingSpec& spec,
                                      const StateVector& state) {
  poly.validate();
  spec.validate();
  const std::size_t n = spec.size();
  const auto b = effective_coefficients(spec.coeffs);

  StateVector out = state;
  out *= poly.coefficients[0];
  std::size_t tuples = 1;
  for (int k = 1; k <= poly.degree(); ++k) {
    tuples *= n;
    if (tuples > kSkipgramBudget) {
      throw DimensionError("skip-gram enumeration of " + std::to_string(n) + "^" +
                           std::to_string(k) + " tuples exceeds the budget");
    }
    // odometer over alpha in {0..n-1}^k; alpha[0] is applied last
    std::vector<std::size_t> alpha(static_cast<std::size_t>(k), 0);
    for (std::size_t t = 0; t < tuples; ++t) {
      StateVector term = state;
      complex_t weight = poly.coefficients[static_cast<std::size_t>(k)];
      for (std::size_t pos = alpha.size(); pos-- > 0;) {
        const std::size_t j = alpha[pos];
        term = apply_circuit(*spec.token_circuits[j], spec.token_params[j], std::move(term));
        weight *= b[j];
      }
      axpy_inplace(weight, term, out);
      for (std::size_t pos = 0; pos < alpha.size(); ++pos) {
        if (++alpha[pos] < n) break;
        alpha[pos] = 0;
      }
    }
  }
  return out;
}

double polynomial_sup_norm(const PolynomialSpec& poly, int grid_points) {
  if (grid_points < 2) throw DimensionError("sup-norm grid needs at least 2 points");
  double worst = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double x = -1.0 + 2.0 * static_cast<double>(i) / (grid_points - 1);
    worst = std::max(worst, std::abs(poly.evaluate(x)));
  }
  return worst;
}

double final_postselection_prob(const PolynomialSpec& poly, const BlockEncodingSpec& spec) {
  return apply_polynomial(poly, spec, basis_state(spec.num_qubits(), 0)).norm_squared();
}

}  // namespace quixer
