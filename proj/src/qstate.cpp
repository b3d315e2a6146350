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

#include "quixer/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "quixer/errors.hpp"

namespace quixer {

namespace {

void check_qubits(int num_qubits) {
  if (num_qubits < 1 || num_qubits > 30) {
    throw DimensionError("qubit count must be in [1, 30], got " +
                         std::to_string(num_qubits));
  }
}

void check_same_dim(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw DimensionError("state dimension mismatch: " +
                         std::to_string(a.num_qubits()) + " vs " +
                         std::to_string(b.num_qubits()) + " qubits");
  }
}

}  // namespace

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
  check_qubits(num_qubits);
  amps_.assign(std::size_t{1} << num_qubits, complex_t{0.0, 0.0});
}

StateVector::StateVector(int num_qubits, std::vector<complex_t> amplitudes)
    : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
  check_qubits(num_qubits);
  if (amps_.size() != (std::size_t{1} << num_qubits)) {
    throw DimensionError("amplitude vector length " +
                         std::to_string(amps_.size()) + " is not 2^" +
                         std::to_string(num_qubits));
  }
}

double StateVector::norm_squared() const noexcept {
  double acc = 0.0;
  for (const auto& a : amps_) acc += std::norm(a);
  return acc;
}

double StateVector::norm() const noexcept { return std::sqrt(norm_squared()); }

bool StateVector::is_normalized(double tol) const noexcept {
  return std::abs(norm() - 1.0) <= tol;
}

StateVector& StateVector::operator*=(complex_t s) noexcept {
  for (auto& a : amps_) a *= s;
  return *this;
}

StateVector& StateVector::operator+=(const StateVector& other) {
  check_same_dim(*this, other);
  for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] += other.amps_[i];
  return *this;
}

StateVector basis_state(int num_qubits, std::size_t index) {
  StateVector s(num_qubits);
  if (index >= s.dim()) {
    throw DimensionError("basis index " + std::to_string(index) +
                         " out of range for " + std::to_string(num_qubits) +
                         " qubits");
  }
  s[index] = 1.0;
  return s;
}

complex_t inner_product(const StateVector& a, const StateVector& b) {
  check_same_dim(a, b);
  complex_t acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

StateVector axpy_state(complex_t alpha, const StateVector& x,
                       const StateVector& y) {
  StateVector out = y;
  axpy_inplace(alpha, x, out);
  return out;
}

void axpy_inplace(complex_t alpha, const StateVector& x, StateVector& y) {
  check_same_dim(x, y);
  auto ys = y.amplitudes();
  auto xs = x.amplitudes();
  for (std::size_t i = 0; i < ys.size(); ++i) ys[i] += alpha * xs[i];
}

StateVector apply_pauli(const PauliObservable& obs, const StateVector& state) {
  if (obs.qubit < 0 || obs.qubit >= state.num_qubits()) {
    throw DimensionError("observable qubit " + std::to_string(obs.qubit) +
                         " out of range for " +
                         std::to_string(state.num_qubits()) + " qubits");
  }
  const std::size_t bit = std::size_t{1} << obs.qubit;
  StateVector out(state.num_qubits());
  for (std::size_t i = 0; i < state.dim(); ++i) {
    const bool one = (i & bit) != 0;
    switch (obs.axis) {
      case PauliAxis::X:
        out[i ^ bit] = state[i];
        break;
      case PauliAxis::Y:
        // Y|0> = i|1>, Y|1> = -i|0>
        out[i ^ bit] = (one ? complex_t{0, -1} : complex_t{0, 1}) * state[i];
        break;
      case PauliAxis::Z:
        out[i] = one ? -state[i] : state[i];
        break;
    }
  }
  return out;
}

double expectation(const StateVector& state, const PauliObservable& obs) {
  const complex_t value = inner_product(state, apply_pauli(obs, state));
  if (std::abs(value.imag()) > 1e-10) {
    throw NumericError("Pauli expectation has imaginary residue " +
                       std::to_string(value.imag()));
  }
  return value.real();
}

DenseOperator::DenseOperator(std::size_t dim)
    : dim_(dim), entries_(dim * dim, complex_t{0.0, 0.0}) {}

DenseOperator DenseOperator::identity(std::size_t dim) {
  DenseOperator out(dim);
  for (std::size_t i = 0; i < dim; ++i) out(i, i) = 1.0;
  return out;
}

DenseOperator DenseOperator::adjoint() const {
  DenseOperator out(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

StateVector DenseOperator::apply(const StateVector& state) const {
  if (state.dim() != dim_) {
    throw DimensionError("operator of dimension " + std::to_string(dim_) +
                         " applied to state of dimension " +
                         std::to_string(state.dim()));
  }
  StateVector out(state.num_qubits());
  for (std::size_t r = 0; r < dim_; ++r) {
    complex_t acc{0.0, 0.0};
    for (std::size_t c = 0; c < dim_; ++c) acc += (*this)(r, c) * state[c];
    out[r] = acc;
  }
  return out;
}

double DenseOperator::max_abs_diff(const DenseOperator& other) const {
  if (other.dim_ != dim_) throw DimensionError("operator dimension mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    worst = std::max(worst, std::abs(entries_[i] - other.entries_[i]));
  return worst;
}

double DenseOperator::unitarity_error() const {
  return (adjoint() * (*this)).max_abs_diff(identity(dim_));
}

DenseOperator& DenseOperator::operator+=(const DenseOperator& other) {
  if (other.dim_ != dim_) throw DimensionError("operator dimension mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

DenseOperator& DenseOperator::operator*=(complex_t s) {
  for (auto& e : entries_) e *= s;
  return *this;
}

DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
  if (a.dim_ != b.dim_) throw DimensionError("operator dimension mismatch");
  const std::size_t n = a.dim_;
  DenseOperator out(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k) {
      const complex_t ark = a(r, k);
      if (ark == complex_t{0.0, 0.0}) continue;
      for (std::size_t c = 0; c < n; ++c) out(r, c) += ark * b(k, c);
    }
  return out;
}

DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
  const std::size_t n = a.dim_ * b.dim_;
  DenseOperator out(n);
  for (std::size_t ar = 0; ar < a.dim_; ++ar)
    for (std::size_t ac = 0; ac < a.dim_; ++ac)
      for (std::size_t br = 0; br < b.dim_; ++br)
        for (std::size_t bc = 0; bc < b.dim_; ++bc)
          out(ar * b.dim_ + br, ac * b.dim_ + bc) = a(ar, ac) * b(br, bc);
  return out;
}

}  // namespace quixer
