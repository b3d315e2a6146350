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
 * End-to-end Quixer model.
 *
 * For a context w_0..w_{n-1} the forward pass computes token angles
 * theta_j = W_E e(w_j), builds M = sum_j b_j U(theta_j), forms
 * phi_raw = P_c(M)|0>, normalizes it (||phi_raw||^2 is the postselection
 * probability), applies U_FF, reads <X_k>, <Y_k>, <Z_k> for every qubit and
 * maps the 3q expectations to logits with a two-layer ReLU head.
 */

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "quixer/circuits.hpp"
#include "quixer/lcu.hpp"
#include "quixer/matrix.hpp"
#include "quixer/qsvt.hpp"

namespace quixer {

using TokenId = std::uint32_t;

/// Below this norm the polynomial-transformed state is treated as degenerate.
inline constexpr double kDegenerateNorm = 1e-12;

struct ModelShape {
  std::size_t vocab_size = 0;
  std::size_t embed_dim = 512;
  int num_qubits = 6;
  std::size_t window = 32;
  int degree = 3;
  int ansatz_layers = 4;
  /// 0 selects the default 4 * 3q.
  std::size_t head_hidden = 0;

  [[nodiscard]] std::size_t angles_per_token() const noexcept {
    return 4 * static_cast<std::size_t>(ansatz_layers) * static_cast<std::size_t>(num_qubits);
  }
  [[nodiscard]] std::size_t readout_dim() const noexcept {
    return 3 * static_cast<std::size_t>(num_qubits);
  }
  [[nodiscard]] std::size_t hidden_dim() const noexcept {
    return head_hidden ? head_hidden : 4 * readout_dim();
  }
  void validate() const;

  friend bool operator==(const ModelShape&, const ModelShape&) = default;
};

/// One LCU + polynomial block: its own token map W_E, mixing weights and
/// polynomial coefficients.
struct MixerLayer {
  Matrix token_map;  // angles_per_token x embed_dim
  LcuCoefficients lcu;
  PolynomialSpec poly;
};

struct QuixerModel {
  ModelShape shape;
  std::shared_ptr<const GateCircuit> token_circuit;
  std::shared_ptr<const GateCircuit> ff_circuit;

  Matrix embedding;  // vocab_size x embed_dim
  MixerLayer mixer;
  std::vector<double> ff_params;
  Matrix head_w1;  // hidden x 3q
  std::vector<double> head_b1;
  Matrix head_w2;  // vocab x hidden
  std::vector<double> head_b2;

  /// Throws DimensionError if any tensor disagrees with `shape`.
  void validate() const;
};

/// All-zero parameters with c = (0, 1, 0, ...) and uniform raw amplitudes.
QuixerModel make_model(const ModelShape& shape);

/**
 * Random initialization: head and W_E from U(+-1/sqrt(fan_in)), embeddings
 * from N(0, 1), U_FF angles and LCU phases from U(-pi, pi), raw amplitudes
 * from U(0.5, 1.5), polynomial P(x) = x.
 */
QuixerModel init_model(const ModelShape& shape, std::uint64_t seed);

/// theta = W_E e(token).
std::vector<double> token_angles(const QuixerModel& model, TokenId token);

/// Block encoding of `layer` for `context`, using the model's embeddings.
BlockEncodingSpec context_block_encoding(const QuixerModel& model, const MixerLayer& layer,
                                         std::span<const TokenId> context);

/// [<X_0>..<X_{q-1}>, <Y_0>.., <Z_0>..]. Throws on a state whose norm is
/// more than 1e-8 from one.
std::vector<double> readout_expectations(const StateVector& state);

struct ForwardTrace {
  std::vector<std::vector<double>> token_params;  // theta_j
  std::vector<complex_t> mix_weights;             // b_j
  std::vector<StateVector> powers;                // v_0..v_d
  /// images[k][j] = U_j v_k for k < d; filled only when requested.
  std::vector<std::vector<StateVector>> images;
  StateVector raw_state;    // P(M)|0>
  double raw_norm = 0.0;
  double postselection_prob = 0.0;
  StateVector normalized_state;
  StateVector final_state;  // U_FF phi
  std::vector<double> expectations;
  std::vector<double> hidden_pre;
  std::vector<double> hidden;  // after ReLU and dropout
  std::vector<double> logits;
};

struct ForwardOptions {
  /// Per-hidden-unit multipliers (0 or 1/(1-rate)); empty disables dropout.
  std::span<const double> dropout_scale;
  bool keep_images = false;
};

/// Logits for the next token after `context` (length must equal the window).
ForwardTrace forward(const QuixerModel& model, std::span<const TokenId> context,
                     const ForwardOptions& options = {});

/**
 * Stacked mixers: phi_raw = P_L(M_L) ... P_1(M_1)|0>, then the shared U_FF,
 * readout and head of `model`. A single layer equal to model.mixer
 * reproduces forward().
 */
ForwardTrace forward_multilayer(const QuixerModel& model, std::span<const MixerLayer> layers,
                                std::span<const TokenId> context);

}  // namespace quixer
