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

#include "quixer/circuits.hpp"

#include <array>
#include <cmath>

#include "quixer/errors.hpp"

namespace quixer {

namespace {

using Mat2 = std::array<complex_t, 4>;  // row-major [[m0, m1], [m2, m3]]

constexpr complex_t kI{0.0, 1.0};

/// 2x2 matrix of the rotation part of a gate (the target action for controlled kinds).
Mat2 rotation_matrix(GateKind kind, double theta) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  switch (kind) {
    case GateKind::RX:
    case GateKind::CRX:
      return {c, -kI * s, -kI * s, c};
    case GateKind::RY:
    case GateKind::CRY:
      return {c, -s, s, c};
    case GateKind::RZ:
    case GateKind::CRZ:
      return {std::polar(1.0, -0.5 * theta), 0.0, 0.0, std::polar(1.0, 0.5 * theta)};
    case GateKind::CX:
      return {0.0, 1.0, 1.0, 0.0};
    case GateKind::GlobalPhase:
      break;
  }
  return {1.0, 0.0, 0.0, 1.0};
}

/// Pauli generator A with R_A(theta) = exp(-i theta A / 2).
Mat2 generator_matrix(GateKind kind) {
  switch (kind) {
    case GateKind::RX:
    case GateKind::CRX:
      return {0.0, 1.0, 1.0, 0.0};
    case GateKind::RY:
    case GateKind::CRY:
      return {0.0, -kI, kI, 0.0};
    case GateKind::RZ:
    case GateKind::CRZ:
      return {1.0, 0.0, 0.0, -1.0};
    default:
      return {1.0, 0.0, 0.0, 1.0};
  }
}

Mat2 dagger(const Mat2& m) {
  return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])};
}

/// Applies `m` to `target`, restricted to basis states with `control` set
/// when a control is given.
void apply_mat2(std::span<complex_t> amps, int target, std::optional<int> control,
                const Mat2& m) {
  const std::size_t tbit = std::size_t{1} << target;
  const std::size_t cbit = control ? (std::size_t{1} << *control) : 0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i & tbit) continue;
    if (cbit && !(i & cbit)) continue;
    const std::size_t j = i | tbit;
    const complex_t a0 = amps[i];
    const complex_t a1 = amps[j];
    amps[i] = m[0] * a0 + m[1] * a1;
    amps[j] = m[2] * a0 + m[3] * a1;
  }
}

double gate_angle(const Gate& g, std::span<const double> params) {
  return g.param_slot ? params[*g.param_slot] : 0.0;
}

void apply_gate(const Gate& g, double theta, bool adjoint, std::span<complex_t> amps) {
  if (g.kind == GateKind::GlobalPhase) {
    const complex_t phase = std::polar(1.0, adjoint ? -theta : theta);
    for (auto& a : amps) a *= phase;
    return;
  }
  const Mat2 m = rotation_matrix(g.kind, theta);
  apply_mat2(amps, g.target, g.control, adjoint ? dagger(m) : m);
}

void check_params(const GateCircuit& circ, std::span<const double> params,
                  const StateVector* state) {
  if (params.size() != circ.num_params()) {
    throw DimensionError("circuit expects " + std::to_string(circ.num_params()) +
                         " parameters, got " + std::to_string(params.size()));
  }
  if (state && state->num_qubits() != circ.num_qubits()) {
    throw DimensionError("circuit on " + std::to_string(circ.num_qubits()) +
                         " qubits applied to a " + std::to_string(state->num_qubits()) +
                         "-qubit state");
  }
}

DenseOperator mat2_operator(const Mat2& m) {
  DenseOperator out(2);
  out(0, 0) = m[0];
  out(0, 1) = m[1];
  out(1, 0) = m[2];
  out(1, 1) = m[3];
  return out;
}

/// Tensor product over all qubits, `pick(k)` giving the 2x2 factor for qubit k.
template <typename Pick>
DenseOperator embed(int num_qubits, Pick pick) {
  DenseOperator acc = pick(num_qubits - 1);
  for (int k = num_qubits - 2; k >= 0; --k) acc = kron(acc, pick(k));
  return acc;
}

}  // namespace

std::string_view to_string(GateKind kind) noexcept {
  switch (kind) {
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CRX: return "CRX";
    case GateKind::CRY: return "CRY";
    case GateKind::CRZ: return "CRZ";
    case GateKind::GlobalPhase: return "GlobalPhase";
    case GateKind::CX: return "CX";
  }
  return "?";
}

GateKind gate_kind_from_string(std::string_view name) {
  for (GateKind k : {GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::CRX,
                     GateKind::CRY, GateKind::CRZ, GateKind::GlobalPhase, GateKind::CX}) {
    if (to_string(k) == name) return k;
  }
  throw DimensionError("unknown gate kind '" + std::string(name) + "'");
}

bool is_controlled(GateKind kind) noexcept {
  return kind == GateKind::CRX || kind == GateKind::CRY || kind == GateKind::CRZ ||
         kind == GateKind::CX;
}

bool is_parameterised(GateKind kind) noexcept { return kind != GateKind::CX; }

GateCircuit::GateCircuit(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 1) throw DimensionError("circuit needs at least one qubit");
}

GateCircuit& GateCircuit::add(const Gate& gate) {
  auto in_range = [this](int k) { return k >= 0 && k < num_qubits_; };
  if (!in_range(gate.target)) {
    throw DimensionError("gate target " + std::to_string(gate.target) + " out of range");
  }
  if (is_controlled(gate.kind) != gate.control.has_value()) {
    throw DimensionError(std::string(to_string(gate.kind)) +
                         (gate.control ? " takes no control" : " needs a control"));
  }
  if (gate.control && (!in_range(*gate.control) || *gate.control == gate.target)) {
    throw DimensionError("invalid control qubit for " + std::string(to_string(gate.kind)));
  }
  if (is_parameterised(gate.kind) != gate.param_slot.has_value()) {
    throw DimensionError(std::string(to_string(gate.kind)) +
                         (gate.param_slot ? " takes no parameter" : " needs a parameter slot"));
  }
  if (gate.param_slot) num_params_ = std::max(num_params_, *gate.param_slot + 1);
  gates_.push_back(gate);
  return *this;
}

StateVector apply_circuit(const GateCircuit& circ, std::span<const double> params,
                          StateVector state) {
  check_params(circ, params, &state);
  for (const Gate& g : circ.gates()) {
    apply_gate(g, gate_angle(g, params), false, state.amplitudes());
  }
  return state;
}

StateVector apply_adjoint(const GateCircuit& circ, std::span<const double> params,
                          StateVector state) {
  check_params(circ, params, &state);
  const auto& gates = circ.gates();
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    apply_gate(*it, gate_angle(*it, params), true, state.amplitudes());
  }
  return state;
}

StateVector backprop_circuit(const GateCircuit& circ, std::span<const double> params,
                             StateVector output, StateVector adjoint,
                             std::span<double> param_grads) {
  check_params(circ, params, &output);
  check_params(circ, params, &adjoint);
  if (param_grads.size() != circ.num_params()) {
    throw DimensionError("gradient buffer has wrong length");
  }
  const auto& gates = circ.gates();
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    const Gate& g = *it;
    const double theta = gate_angle(g, params);
    if (g.param_slot) {
      // dU/dtheta = i U for the phase and -(i/2) (P1 (x) A) U otherwise, and
      // `output` currently holds U times the gate's input.
      complex_t overlap{0.0, 0.0};
      if (g.kind == GateKind::GlobalPhase) {
        overlap = inner_product(adjoint, output);
        param_grads[*g.param_slot] += -overlap.imag();
      } else {
        StateVector generated = output;
        const Mat2 a = generator_matrix(g.kind);
        if (g.control) {
          // zero the control-off subspace, then apply A on the rest
          const std::size_t cbit = std::size_t{1} << *g.control;
          for (std::size_t i = 0; i < generated.dim(); ++i)
            if (!(i & cbit)) generated[i] = 0.0;
        }
        apply_mat2(generated.amplitudes(), g.target, g.control, a);
        overlap = inner_product(adjoint, generated);
        param_grads[*g.param_slot] += 0.5 * overlap.imag();
      }
    }
    apply_gate(g, theta, true, output.amplitudes());
    apply_gate(g, theta, true, adjoint.amplitudes());
  }
  return adjoint;
}

DenseOperator dense_matrix(const GateCircuit& circ, std::span<const double> params) {
  check_params(circ, params, nullptr);
  const int q = circ.num_qubits();
  if (q > kMaxDenseQubits) {
    throw DimensionError("dense realization limited to " +
                         std::to_string(kMaxDenseQubits) + " qubits");
  }
  const DenseOperator id2 = DenseOperator::identity(2);
  DenseOperator p0(2), p1(2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;

  DenseOperator total = DenseOperator::identity(std::size_t{1} << q);
  for (const Gate& g : circ.gates()) {
    const double theta = gate_angle(g, params);
    DenseOperator op;
    if (g.kind == GateKind::GlobalPhase) {
      op = DenseOperator::identity(std::size_t{1} << q);
      op *= std::polar(1.0, theta);
    } else {
      const DenseOperator m = mat2_operator(rotation_matrix(g.kind, theta));
      if (!g.control) {
        op = embed(q, [&](int k) { return k == g.target ? m : id2; });
      } else {
        op = embed(q, [&](int k) { return k == *g.control ? p0 : id2; });
        op += embed(q, [&](int k) {
          if (k == *g.control) return p1;
          return k == g.target ? m : id2;
        });
      }
    }
    total = op * total;
  }
  return total;
}

GateCircuit circuit14(int num_qubits, int layers) {
  if (num_qubits < 2) throw DimensionError("circuit 14 needs at least 2 qubits");
  if (layers < 1) throw DimensionError("circuit 14 needs at least 1 layer");
  const int q = num_qubits;
  auto wrap = [q](int k) { return ((k % q) + q) % q; };
  GateCircuit circ(q);
  std::size_t slot = 0;
  for (int layer = 0; layer < layers; ++layer) {
    for (int j = 0; j < q; ++j) circ.add(Gate::ry(j, slot++));
    for (int j = q - 1; j >= 0; --j) circ.add(Gate::crx(j, wrap(j - 1), slot++));
    for (int j = 0; j < q; ++j) circ.add(Gate::ry(j, slot++));
    for (int step = 0; step < q; ++step) {
      const int j = wrap(q - 2 - step);
      circ.add(Gate::crx(j, wrap(j + 1), slot++));
    }
  }
  return circ;
}

nlohmann::json circuit_to_json(const GateCircuit& circ) {
  nlohmann::json gates = nlohmann::json::array();
  for (const Gate& g : circ.gates()) {
    nlohmann::json entry{{"kind", to_string(g.kind)}, {"target", g.target}};
    if (g.control) entry["control"] = *g.control;
    if (g.param_slot) entry["param_slot"] = *g.param_slot;
    gates.push_back(std::move(entry));
  }
  return {{"num_qubits", circ.num_qubits()},
          {"num_params", circ.num_params()},
          {"gates", std::move(gates)}};
}

GateCircuit circuit_from_json(const nlohmann::json& doc) {
  GateCircuit circ(doc.at("num_qubits").get<int>());
  for (const auto& entry : doc.at("gates")) {
    Gate g;
    g.kind = gate_kind_from_string(entry.at("kind").get<std::string>());
    g.target = entry.at("target").get<int>();
    if (entry.contains("control")) g.control = entry["control"].get<int>();
    if (entry.contains("param_slot")) g.param_slot = entry["param_slot"].get<std::size_t>();
    circ.add(g);
  }
  const auto declared = doc.at("num_params").get<std::size_t>();
  if (declared != circ.num_params()) {
    throw DimensionError("circuit JSON declares " + std::to_string(declared) +
                         " parameters but its gates use " +
                         std::to_string(circ.num_params()));
  }
  return circ;
}

}  // namespace quixer
