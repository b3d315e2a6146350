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

#include "quixer/lcu.hpp"

#include <cmath>
#include <string>

#include "quixer/errors.hpp"

namespace quixer {

std::vector<double> normalized_amplitudes(const LcuCoefficients& coeffs) {
  if (coeffs.raw_amplitudes.empty()) {
    throw DimensionError("LCU needs at least one coefficient");
  }
  if (coeffs.phases.size() != coeffs.raw_amplitudes.size()) {
    throw DimensionError("LCU amplitude and phase vectors differ in length");
  }
  double norm2 = 0.0;
  for (double a : coeffs.raw_amplitudes) norm2 += a * a;
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
    throw NumericError("LCU raw amplitudes have zero or non-finite norm");
  }
  const double inv = 1.0 / std::sqrt(norm2);
  std::vector<double> a(coeffs.raw_amplitudes);
  for (double& v : a) v *= inv;
  return a;
}

std::vector<complex_t> effective_coefficients(const LcuCoefficients& coeffs) {
  const std::vector<double> a = normalized_amplitudes(coeffs);
  std::vector<complex_t> b(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    b[j] = std::polar(a[j] * a[j], coeffs.phases[j]);
  }
  return b;
}

int BlockEncodingSpec::num_qubits() const {
  if (token_circuits.empty() || !token_circuits.front()) {
    throw DimensionError("block encoding has no token circuits");
  }
  return token_circuits.front()->num_qubits();
}

void BlockEncodingSpec::validate() const {
  const int q = num_qubits();
  const std::size_t p = token_circuits.front()->num_params();
  if (coeffs.size() != token_circuits.size() || token_params.size() != token_circuits.size()) {
    throw DimensionError("block encoding has " + std::to_string(token_circuits.size()) +
                         " circuits, " + std::to_string(coeffs.size()) + " coefficients and " +
                         std::to_string(token_params.size()) + " parameter vectors");
  }
  if (coeffs.phases.size() != coeffs.raw_amplitudes.size()) {
    throw DimensionError("LCU has " + std::to_string(coeffs.raw_amplitudes.size()) +
                         " amplitudes but " + std::to_string(coeffs.phases.size()) + " phases");
  }
  for (std::size_t j = 0; j < token_circuits.size(); ++j) {
    const auto& c = token_circuits[j];
    if (!c || c->num_qubits() != q || c->num_params() != p || token_params[j].size() != p) {
      throw DimensionError("token circuit " + std::to_string(j) + " has inconsistent shape");
    }
  }
}

StateVector apply_combination(std::span<const complex_t> weights,
                              const BlockEncodingSpec& spec, const StateVector& state) {
  spec.validate();
  if (state.num_qubits() != spec.num_qubits()) {
    throw DimensionError("LCU on " + std::to_string(spec.num_qubits()) +
                         " qubits applied to a " + std::to_string(state.num_qubits()) +
                         "-qubit state");
  }
  if (weights.size() != spec.size()) throw DimensionError("weight count mismatch");
  StateVector out(state.num_qubits());
  // fixed j order keeps the reduction bitwise reproducible
  for (std::size_t j = 0; j < spec.size(); ++j) {
    const StateVector image = apply_circuit(*spec.token_circuits[j], spec.token_params[j], state);
    axpy_inplace(weights[j], image, out);
  }
  return out;
}

StateVector apply_m(const BlockEncodingSpec& spec, const StateVector& state) {
  const auto b = effective_coefficients(spec.coeffs);
  return apply_combination(b, spec, state);
}

StateVector apply_m_adjoint(const BlockEncodingSpec& spec, const StateVector& state) {
  spec.validate();
  if (state.num_qubits() != spec.num_qubits()) throw DimensionError("state dimension mismatch");
  const auto b = effective_coefficients(spec.coeffs);
  StateVector out(state.num_qubits());
  for (std::size_t j = 0; j < spec.size(); ++j) {
    const StateVector image = apply_adjoint(*spec.token_circuits[j], spec.token_params[j], state);
    axpy_inplace(std::conj(b[j]), image, out);
  }
  return out;
}

int control_qubit_count(std::size_t num_unitaries) {
  int m = 0;
  while ((std::size_t{1} << m) < num_unitaries) ++m;
  return m;
}

DenseOperator prep_unitary(std::span<const double> amplitudes) {
  const std::size_t n = amplitudes.size();
  std::vector<std::vector<double>> columns;
  columns.emplace_back(amplitudes.begin(), amplitudes.end());
  for (std::size_t e = 0; e < n && columns.size() < n; ++e) {
    std::vector<double> v(n, 0.0);
    v[e] = 1.0;
    // two Gram-Schmidt passes for stability
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& c : columns) {
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += c[i] * v[i];
        for (std::size_t i = 0; i < n; ++i) v[i] -= dot * c[i];
      }
    }
    double norm2 = 0.0;
    for (double x : v) norm2 += x * x;
    if (norm2 < 1e-12) continue;
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& x : v) x *= inv;
    columns.push_back(std::move(v));
  }
  DenseOperator out(n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) out(r, c) = columns[c][r];
  return out;
}

DenseOperator build_explicit_block_encoding(const BlockEncodingSpec& spec) {
  spec.validate();
  const int q = spec.num_qubits();
  const int m = std::max(1, control_qubit_count(spec.size()));
  if (q + m > kMaxDenseQubits) {
    throw DimensionError("explicit block encoding limited to " +
                         std::to_string(kMaxDenseQubits) + " qubits in total");
  }
  const std::size_t padded = std::size_t{1} << m;
  const std::size_t data_dim = std::size_t{1} << q;

  std::vector<double> amps = normalized_amplitudes(spec.coeffs);
  amps.resize(padded, 0.0);
  const DenseOperator prep = kron(prep_unitary(amps), DenseOperator::identity(data_dim));

  DenseOperator select(padded * data_dim);
  for (std::size_t j = 0; j < padded; ++j) {
    DenseOperator block = DenseOperator::identity(data_dim);
    if (j < spec.size()) {
      block = dense_matrix(*spec.token_circuits[j], spec.token_params[j]);
      block *= std::polar(1.0, spec.coeffs.phases[j]);
    }
    for (std::size_t r = 0; r < data_dim; ++r)
      for (std::size_t c = 0; c < data_dim; ++c)
        select(j * data_dim + r, j * data_dim + c) = block(r, c);
  }
  return prep.adjoint() * select * prep;
}

DenseOperator top_left_block(const DenseOperator& op, int data_qubits) {
  const std::size_t d = std::size_t{1} << data_qubits;
  if (d > op.dim()) throw DimensionError("block larger than operator");
  DenseOperator out(d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) out(r, c) = op(r, c);
  return out;
}

double postselection_prob_m(const BlockEncodingSpec& spec) {
  return apply_m(spec, basis_state(spec.num_qubits(), 0)).norm_squared();
}

}  // namespace quixer
