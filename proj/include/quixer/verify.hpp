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
 * Independent dense oracles and the property suites built on them.
 *
 * Oracles here never call the matrix-free production path: they work on
 * dense matrices assembled gate by gate from Kronecker products.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "quixer/model.hpp"
#include "quixer/resources.hpp"

namespace quixer::verify {

using CoefficientFn = std::function<std::vector<complex_t>(const LcuCoefficients&)>;

// ---------------------------------------------------------------- oracles

/// Random circuit-14 token unitaries with uniform(-pi, pi) angles,
/// raw amplitudes from U(0.1, 1.5) and phases from U(-pi, pi).
BlockEncodingSpec random_block_encoding(std::mt19937_64& rng, int q, std::size_t n,
                                        int layers = 1);
StateVector random_state(std::mt19937_64& rng, int q);
/// Coefficients from U(-1, 1).
PolynomialSpec random_polynomial(std::mt19937_64& rng, int degree);

std::vector<DenseOperator> dense_token_unitaries(const BlockEncodingSpec& spec);
/// sum_j w_j U_j.
DenseOperator dense_combination(const std::vector<complex_t>& weights,
                                const std::vector<DenseOperator>& unitaries);
/// P(A) by Horner's rule.
DenseOperator dense_polynomial(const PolynomialSpec& poly, const DenseOperator& a);
/// sum_jk conj(b_j) b_k <0|U_j^dagger U_k|0>.
double postselection_cross_terms(const std::vector<complex_t>& b,
                                 const std::vector<DenseOperator>& unitaries);
/// Singular values, descending.
std::vector<double> singular_values(const DenseOperator& a);
/// Dense 2^q x 2^q Pauli matrix acting on one qubit.
DenseOperator dense_pauli(int q, const PauliObservable& obs);

/// Logits of `model` on `context` through the dense pipeline.
std::vector<double> dense_forward_logits(const QuixerModel& model,
                                         std::span<const TokenId> context);

/// Gate total recounted gate by gate over the layer structure.
std::uint64_t recount_gates(const ResourceQuery& query);

// ----------------------------------------------------------------- suites

enum class Scale { Small, Full };

struct Options {
  Scale scale = Scale::Small;
  std::uint64_t seed = 0;
  /// Coefficient formula used by the reference side of the block-encoding
  /// suite; swapping it out is the negative control.
  CoefficientFn coefficients = effective_coefficients;
};

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::size_t instances = 0;
  double worst = 0.0;
  double tolerance = 0.0;
  double seconds = 0.0;
  std::string detail;
};

SuiteResult block_encoding_suite(const Options& opts);
SuiteResult polynomial_suite(const Options& opts);
SuiteResult postselection_identity_suite(const Options& opts);
SuiteResult postselection_bound_suite(const Options& opts);
SuiteResult gradient_suite(const Options& opts);
SuiteResult circuit_count_suite(const Options& opts);
SuiteResult resource_suite(const Options& opts);
SuiteResult forward_oracle_suite(const Options& opts);
SuiteResult invariance_suite(const Options& opts);

std::vector<SuiteResult> run_all(const Options& opts);

/// "PASS name  instances=.. worst=.. tol=.. (..s)  detail"
std::string format_result(const SuiteResult& r);

}  // namespace quixer::verify
