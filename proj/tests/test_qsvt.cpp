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

#include "doctest.h"

#include "quixer/errors.hpp"
#include "quixer/qsvt.hpp"
#include "support.hpp"

using namespace quixer;

namespace {

BlockEncodingSpec random_spec(std::mt19937_64& rng, int q, std::size_t n) {
  auto circ = std::make_shared<const GateCircuit>(circuit14(q, 1));
  BlockEncodingSpec spec;
  for (std::size_t j = 0; j < n; ++j) {
    spec.token_circuits.push_back(circ);
    spec.token_params.push_back(testing::random_angles(rng, circ->num_params()));
    spec.coeffs.raw_amplitudes.push_back(testing::uniform(rng, 0.1, 2.0));
    spec.coeffs.phases.push_back(testing::uniform(rng, -3.0, 3.0));
  }
  return spec;
}

PolynomialSpec random_poly(std::mt19937_64& rng, int d) {
  PolynomialSpec p;
  for (int k = 0; k <= d; ++k) p.coefficients.push_back(testing::uniform(rng, -1.0, 1.0));
  return p;
}

}  // namespace

TEST_CASE("polynomial basics") {
  std::mt19937_64 rng(13);
  const BlockEncodingSpec spec = random_spec(rng, 3, 4);
  const StateVector s = testing::random_state(rng, 3);
  CHECK(testing::max_diff(apply_polynomial({{0.0, 1.0}}, spec, s), apply_m(spec, s)) < 1e-15);
  CHECK(testing::max_diff(apply_polynomial({{1.0, 0.0}}, spec, s), s) < 1e-15);
  CHECK_THROWS_AS(PolynomialSpec{{1.0}}.validate(), DimensionError);
  CHECK(PolynomialSpec{{1.0, -2.0, 0.5}}.evaluate(2.0) == doctest::Approx(-1.0));
}

TEST_CASE("pure power equals repeated apply_m") {
  std::mt19937_64 rng(14);
  const BlockEncodingSpec spec = random_spec(rng, 2, 3);
  const StateVector s = testing::random_state(rng, 2);
  StateVector rep = s;
  for (int k = 0; k < 3; ++k) rep = apply_m(spec, rep);
  CHECK(testing::max_diff(apply_polynomial({{0.0, 0.0, 0.0, 1.0}}, spec, s), rep) < 1e-10);
  const auto powers = mixer_powers(spec, s, 3);
  REQUIRE(powers.size() == 4);
  CHECK(testing::max_diff(powers[3], rep) < 1e-14);
}

TEST_CASE("linearity in coefficients") {
  std::mt19937_64 rng(15);
  const BlockEncodingSpec spec = random_spec(rng, 3, 4);
  const StateVector s = testing::random_state(rng, 3);
  const PolynomialSpec a = random_poly(rng, 3), b = random_poly(rng, 3);
  PolynomialSpec sum = a;
  for (std::size_t k = 0; k < sum.coefficients.size(); ++k) sum.coefficients[k] += b.coefficients[k];
  const StateVector lhs = apply_polynomial(sum, spec, s);
  StateVector rhs = apply_polynomial(a, spec, s);
  rhs += apply_polynomial(b, spec, s);
  CHECK(testing::max_diff(lhs, rhs) < 1e-10);
}

TEST_CASE("skip-gram enumeration") {
  std::mt19937_64 rng(16);
  // d = 2, n = 2 by hand: c0 + c1 sum b_j U_j + c2 sum_jk b_j b_k U_j U_k
  const BlockEncodingSpec spec = random_spec(rng, 2, 2);
  const PolynomialSpec poly{{0.3, -0.7, 0.9}};
  const StateVector psi = testing::random_state(rng, 2);
  const auto b = effective_coefficients(spec.coeffs);
  auto u = [&](std::size_t j, const StateVector& v) {
    return apply_circuit(*spec.token_circuits[j], spec.token_params[j], v);
  };
  StateVector expected = psi;
  expected *= complex_t{0.3, 0.0};
  for (std::size_t j = 0; j < 2; ++j) {
    axpy_inplace(-0.7 * b[j], u(j, psi), expected);
    for (std::size_t k = 0; k < 2; ++k) axpy_inplace(0.9 * b[j] * b[k], u(j, u(k, psi)), expected);
  }
  CHECK(testing::max_diff(skipgram_expansion_oracle(poly, spec, psi), expected) < 1e-12);
  CHECK(testing::max_diff(apply_polynomial(poly, spec, psi), expected) < 1e-12);

  for (int t = 0; t < 10; ++t) {
    const BlockEncodingSpec s3 = random_spec(rng, 3, 3);
    const PolynomialSpec p3 = random_poly(rng, 3);
    const StateVector v = testing::random_state(rng, 3);
    CHECK(testing::max_diff(skipgram_expansion_oracle(p3, s3, v), apply_polynomial(p3, s3, v)) < 1e-10);
  }

  const BlockEncodingSpec big = random_spec(rng, 2, 400);
  CHECK_THROWS_AS(skipgram_expansion_oracle({{0.0, 0.0, 1.0}}, big, basis_state(2, 0)), DimensionError);
}

TEST_CASE("parity split") {
  auto [odd, even] = parity_split({{1.0, 2.0, 3.0, 4.0}});
  CHECK(odd.coefficients == std::vector<double>{0.0, 2.0, 0.0, 4.0});
  CHECK(even.coefficients == std::vector<double>{1.0, 0.0, 3.0, 0.0});

  auto [odd2, even2] = parity_split({{0.5, 0.0, -1.0}});
  CHECK(odd2.coefficients == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(even2.coefficients == std::vector<double>{0.5, 0.0, -1.0});

  std::mt19937_64 rng(17);
  const PolynomialSpec p = random_poly(rng, 5);
  auto [o, e] = parity_split(p);
  for (std::size_t k = 0; k < p.coefficients.size(); ++k) {
    CHECK(o.coefficients[k] + e.coefficients[k] == p.coefficients[k]);
  }
}

TEST_CASE("sup norm and postselection") {
  CHECK(polynomial_sup_norm({{0.0, 1.0}}, 2) == doctest::Approx(1.0));
  CHECK(polynomial_sup_norm({{0.0, 1.0}}, 101) == doctest::Approx(1.0));
  CHECK(polynomial_sup_norm({{0.0, 0.0, 2.0}}, 11) == doctest::Approx(2.0));
  CHECK_THROWS(polynomial_sup_norm({{0.0, 1.0}}, 1));

  std::mt19937_64 rng(18);
  const BlockEncodingSpec spec = random_spec(rng, 3, 4);
  CHECK(final_postselection_prob({{1.0, 0.0}}, spec) == doctest::Approx(1.0));
  auto single = random_spec(rng, 3, 1);
  CHECK(final_postselection_prob({{0.0, 1.0}}, single) == doctest::Approx(1.0));
  for (int t = 0; t < 20; ++t) CHECK(final_postselection_prob(random_poly(rng, 3), random_spec(rng, 2, 3)) >= 0.0);
}
