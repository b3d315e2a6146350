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
 * Parameterised gate circuits.
 *
 * Rotations use the half-angle convention R_A(theta) = exp(-i theta A / 2),
 * so RY(pi) = [[0, -1], [1, 0]]. Controlled rotations fire on |1>.
 * GlobalPhase(theta) multiplies the whole register by exp(i theta).
 */

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "quixer/qstate.hpp"

namespace quixer {

enum class GateKind { RX, RY, RZ, CRX, CRY, CRZ, GlobalPhase, CX };

std::string_view to_string(GateKind kind) noexcept;
GateKind gate_kind_from_string(std::string_view name);

[[nodiscard]] bool is_controlled(GateKind kind) noexcept;
[[nodiscard]] bool is_parameterised(GateKind kind) noexcept;

struct Gate {
  GateKind kind = GateKind::RX;
  int target = 0;
  std::optional<int> control;
  std::optional<std::size_t> param_slot;

  static Gate rx(int target, std::size_t slot) { return {GateKind::RX, target, {}, slot}; }
  static Gate ry(int target, std::size_t slot) { return {GateKind::RY, target, {}, slot}; }
  static Gate rz(int target, std::size_t slot) { return {GateKind::RZ, target, {}, slot}; }
  static Gate crx(int control, int target, std::size_t slot) {
    return {GateKind::CRX, target, control, slot};
  }
  static Gate cry(int control, int target, std::size_t slot) {
    return {GateKind::CRY, target, control, slot};
  }
  static Gate crz(int control, int target, std::size_t slot) {
    return {GateKind::CRZ, target, control, slot};
  }
  static Gate global_phase(std::size_t slot) { return {GateKind::GlobalPhase, 0, {}, slot}; }
  static Gate cx(int control, int target) { return {GateKind::CX, target, control, {}}; }

  friend bool operator==(const Gate&, const Gate&) = default;
};

class GateCircuit {
 public:
  explicit GateCircuit(int num_qubits);

  /// Appends a gate after validating it. Grows num_params to cover its slot.
  GateCircuit& add(const Gate& gate);

  [[nodiscard]] int num_qubits() const noexcept { return num_qubits_; }
  [[nodiscard]] std::size_t num_params() const noexcept { return num_params_; }
  [[nodiscard]] const std::vector<Gate>& gates() const noexcept { return gates_; }

  friend bool operator==(const GateCircuit&, const GateCircuit&) = default;

 private:
  int num_qubits_;
  std::size_t num_params_ = 0;
  std::vector<Gate> gates_;
};

/// U(params) |state>.
StateVector apply_circuit(const GateCircuit& circ, std::span<const double> params,
                          StateVector state);

/// U(params)^dagger |state>.
StateVector apply_adjoint(const GateCircuit& circ, std::span<const double> params,
                          StateVector state);

/**
 * Reverse-mode sweep through a circuit (adjoint-state method).
 *
 * `output` must be U(params)|in> and `adjoint` the loss cotangent at the output
 * in the 2 dL/d(conj psi) convention. Per-parameter derivatives
 * dL/dtheta = Re<adjoint, dU/dtheta in> are added into `param_grads`, and the
 * cotangent at the circuit input, U^dagger adjoint, is returned.
 */
StateVector backprop_circuit(const GateCircuit& circ, std::span<const double> params,
                             StateVector output, StateVector adjoint,
                             std::span<double> param_grads);

/// Exact 2^q x 2^q unitary built from Kronecker products of the gate matrices.
/// Throws DimensionError above kMaxDenseQubits.
DenseOperator dense_matrix(const GateCircuit& circ, std::span<const double> params);

/**
 * Circuit 14 ansatz: per layer an RY ring, a cyclic CRX ring with control j
 * and target j-1, a second RY ring and a cyclic CRX ring with control j and
 * target j+1, all indices mod q. For q = 3 the first ring is (2->1, 1->0,
 * 0->2) and the second (1->2, 0->1, 2->0). 4 * layers * q params.
 */
GateCircuit circuit14(int num_qubits, int layers);

nlohmann::json circuit_to_json(const GateCircuit& circ);
GateCircuit circuit_from_json(const nlohmann::json& doc);

}  // namespace quixer
