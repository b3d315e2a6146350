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
 * Exact gradients of the mean next-token cross-entropy.
 *
 * Reverse accumulation runs through the recorded forward trace: the head,
 * the Pauli readout, U_FF (adjoint-state sweep), the normalization quotient,
 * the polynomial power chain and every token circuit, then into the LCU
 * weights, W_E and the embedding table. Complex cotangents use the
 * 2 dL/d(conj z) convention so dL/dtheta = Re<g, dpsi/dtheta>.
 */

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "quixer/model.hpp"

namespace quixer {

struct Segment {
  std::string name;
  std::size_t offset = 0;
  std::size_t length = 0;
};

/// Flat view of every trainable tensor, one named segment per tensor:
/// embedding, token_map, lcu_amplitudes, lcu_phases, poly_coeffs, ff_params,
/// head_w1, head_b1, head_w2, head_b2.
struct ParameterBundle {
  std::vector<Segment> segments;
  std::vector<double> values;

  [[nodiscard]] std::size_t total_len() const noexcept { return values.size(); }
  [[nodiscard]] const Segment& segment(const std::string& name) const;
};

/// Same layout as ParameterBundle.
struct GradientBundle {
  std::vector<Segment> segments;
  std::vector<double> values;

  [[nodiscard]] const Segment& segment(const std::string& name) const;
  [[nodiscard]] std::span<const double> view(const std::string& name) const;
};

std::vector<Segment> parameter_layout(const ModelShape& shape);
ParameterBundle flatten(const QuixerModel& model);
/// Writes `bundle` back into `model`, whose shape must match the layout.
void unflatten(const ParameterBundle& bundle, QuixerModel& model);

struct Example {
  std::vector<TokenId> context;
  TokenId target = 0;
};

struct GradOptions {
  /// Head-hidden dropout rate; 0 disables it.
  double dropout = 0.0;
  /// Masks are drawn from (mask_seed, mask_offset + example index).
  std::uint64_t mask_seed = 0;
  std::uint64_t mask_offset = 0;
  int threads = 1;
};

struct LossAndGrad {
  double loss = 0.0;
  GradientBundle grads;
  /// Postselection probability of every example, in batch order.
  std::vector<double> postselection;
};

/// Mean cross-entropy (natural log) over `batch` and its exact gradient.
LossAndGrad loss_and_grad(const QuixerModel& model, std::span<const Example> batch,
                          const GradOptions& options = {});

/// Mean cross-entropy without gradients or dropout.
double batch_loss(const QuixerModel& model, std::span<const Example> batch);

/// -log softmax(logits)[target], computed stably.
double cross_entropy(std::span<const double> logits, TokenId target);

/// Dropout multipliers for one example (0 or 1/(1-rate) per hidden unit).
std::vector<double> dropout_mask(std::size_t hidden, double rate, std::uint64_t seed,
                                 std::uint64_t example_index);

struct SegmentCheck {
  std::string name;
  std::size_t sampled = 0;
  double max_rel_error = 0.0;
  bool skipped = false;
  std::string note;
};

struct FiniteDifferenceReport {
  std::vector<SegmentCheck> segments;
  [[nodiscard]] double worst() const;
};

/// Relative error |a - f| / max(|a|, |f|, 1e-6).
double gradient_relative_error(double analytic, double numeric);

/**
 * Compares analytic gradients with central differences at `samples` randomly
 * chosen coordinates per segment (all of them when the segment is smaller).
 * Requires epsilon in [1e-7, 1e-3].
 */
FiniteDifferenceReport finite_difference_check(const QuixerModel& model,
                                               std::span<const Example> batch, double epsilon,
                                               std::size_t samples, std::uint64_t seed);

}  // namespace quixer
