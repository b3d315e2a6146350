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
 * Linear combination of unitaries M = sum_j b_j U_j.
 *
 * The production path applies M matrix-free to a data-register state. The
 * explicit PREP/SELECT block encoding exists to check that path at small
 * scale and never runs during training.
 */

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "quixer/circuits.hpp"
#include "quixer/qstate.hpp"

namespace quixer {

/// Trainable mixing weights. b_j = exp(i phases_j) * a_j^2 with
/// a = raw_amplitudes / ||raw_amplitudes||, so sum_j |b_j| = 1 structurally.
struct LcuCoefficients {
  std::vector<double> raw_amplitudes;
  std::vector<double> phases;

  [[nodiscard]] std::size_t size() const noexcept { return raw_amplitudes.size(); }
};

std::vector<complex_t> effective_coefficients(const LcuCoefficients& coeffs);

/// Unit-l2 amplitude vector a_j loaded by PREP.
std::vector<double> normalized_amplitudes(const LcuCoefficients& coeffs);

struct BlockEncodingSpec {
  LcuCoefficients coeffs;
  std::vector<std::shared_ptr<const GateCircuit>> token_circuits;
  std::vector<std::vector<double>> token_params;

  [[nodiscard]] std::size_t size() const noexcept { return token_circuits.size(); }
  [[nodiscard]] int num_qubits() const;
  /// Throws DimensionError unless all token circuits agree in shape and the
  /// coefficient and parameter lists match them.
  void validate() const;
};

/// sum_j weights_j U_j |state> for explicitly supplied weights.
StateVector apply_combination(std::span<const complex_t> weights,
                              const BlockEncodingSpec& spec, const StateVector& state);

/// M |state>. Generally unnormalized.
StateVector apply_m(const BlockEncodingSpec& spec, const StateVector& state);

/// M^dagger |state> = sum_j conj(b_j) U_j^dagger |state>.
StateVector apply_m_adjoint(const BlockEncodingSpec& spec, const StateVector& state);

/// Real orthogonal matrix whose first column is `amplitudes` (unit norm),
/// completed by Gram-Schmidt against the standard basis.
DenseOperator prep_unitary(std::span<const double> amplitudes);

/**
 * U_M = (PREP^dagger (x) I) SELECT (PREP (x) I) on ceil(log2 n) control qubits
 * (high-order bits) and q data qubits. SELECT applies exp(i gamma_j) U_j on
 * control state |j>; n is padded to a power of two with identity unitaries
 * and zero amplitudes.
 */
DenseOperator build_explicit_block_encoding(const BlockEncodingSpec& spec);

/// (<0| (x) I) U (|0> (x) I): the leading 2^q x 2^q block.
DenseOperator top_left_block(const DenseOperator& op, int data_qubits);

/// Number of control qubits used by the explicit construction.
int control_qubit_count(std::size_t num_unitaries);

/// p_M = ||M |0>||^2.
double postselection_prob_m(const BlockEncodingSpec& spec);

}  // namespace quixer
