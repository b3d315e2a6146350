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
 * Dense statevectors, dense operators and Pauli observables.
 *
 * Qubit k addresses bit k of the basis index (little-endian), so for three
 * qubits |110> is basis index 6 and qubit 0 is the rightmost ket label.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace quixer {

using complex_t = std::complex<double>;

/// Largest register for which dense operators are materialized.
inline constexpr int kMaxDenseQubits = 12;

class StateVector {
 public:
  StateVector() = default;
  /// All-zero amplitudes on `num_qubits` qubits.
  explicit StateVector(int num_qubits);
  StateVector(int num_qubits, std::vector<complex_t> amplitudes);

  [[nodiscard]] int num_qubits() const noexcept { return num_qubits_; }
  [[nodiscard]] std::size_t dim() const noexcept { return amps_.size(); }

  [[nodiscard]] std::span<const complex_t> amplitudes() const noexcept {
    return amps_;
  }
  [[nodiscard]] std::span<complex_t> amplitudes() noexcept { return amps_; }

  complex_t& operator[](std::size_t i) noexcept { return amps_[i]; }
  const complex_t& operator[](std::size_t i) const noexcept { return amps_[i]; }

  [[nodiscard]] double norm_squared() const noexcept;
  [[nodiscard]] double norm() const noexcept;
  /// True when the l2 norm is within `tol` of one.
  [[nodiscard]] bool is_normalized(double tol = 1e-10) const noexcept;

  StateVector& operator*=(complex_t s) noexcept;
  StateVector& operator+=(const StateVector& other);

 private:
  int num_qubits_ = 0;
  std::vector<complex_t> amps_;
};

/// |j> on q qubits. Throws DimensionError when j >= 2^q.
StateVector basis_state(int num_qubits, std::size_t index);

/// <a|b>, conjugating `a`.
complex_t inner_product(const StateVector& a, const StateVector& b);

/// y + alpha * x.
StateVector axpy_state(complex_t alpha, const StateVector& x,
                       const StateVector& y);

/// In-place y += alpha * x.
void axpy_inplace(complex_t alpha, const StateVector& x, StateVector& y);

enum class PauliAxis { X, Y, Z };

struct PauliObservable {
  PauliAxis axis = PauliAxis::Z;
  int qubit = 0;

  friend bool operator==(const PauliObservable&, const PauliObservable&) = default;
};

/// O|psi> for a single-qubit Pauli.
StateVector apply_pauli(const PauliObservable& obs, const StateVector& state);

/// <psi|O|psi>. The imaginary residue is checked against 1e-10 and dropped.
double expectation(const StateVector& state, const PauliObservable& obs);

/// Row-major square complex matrix; verification scale only.
class DenseOperator {
 public:
  DenseOperator() = default;
  explicit DenseOperator(std::size_t dim);

  static DenseOperator identity(std::size_t dim);

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  complex_t& operator()(std::size_t r, std::size_t c) noexcept {
    return entries_[r * dim_ + c];
  }
  const complex_t& operator()(std::size_t r, std::size_t c) const noexcept {
    return entries_[r * dim_ + c];
  }

  [[nodiscard]] DenseOperator adjoint() const;
  [[nodiscard]] StateVector apply(const StateVector& state) const;
  /// max_ij |A_ij - B_ij|
  [[nodiscard]] double max_abs_diff(const DenseOperator& other) const;
  /// max_ij |(A^dagger A - I)_ij|
  [[nodiscard]] double unitarity_error() const;

  DenseOperator& operator+=(const DenseOperator& other);
  DenseOperator& operator*=(complex_t s);

  friend DenseOperator operator*(const DenseOperator& a, const DenseOperator& b);
  /// a (x) b with `a` acting on the high-order bits.
  friend DenseOperator kron(const DenseOperator& a, const DenseOperator& b);

 private:
  std::size_t dim_ = 0;
  std::vector<complex_t> entries_;
};

}  // namespace quixer
