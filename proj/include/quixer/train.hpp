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
 * Training loop: AdamW with cosine-annealed learning rate, head dropout,
 * global-norm gradient clipping and best-validation-epoch selection.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "quixer/grad.hpp"
#include "quixer/textdata.hpp"

namespace quixer {

struct TrainConfig {
  double lr_max = 1e-3;
  double lr_min = 1e-5;
  int epochs = 30;
  /// Contexts per optimizer step.
  std::size_t batch_contexts = 32;
  /// Consecutive stride-1 targets produced by each context.
  std::size_t targets_per_context = 32;
  std::size_t stride = 1;
  double weight_decay = 0.0;
  double dropout = 0.0;
  std::uint64_t seed = 0;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  /// Global l2 clip threshold; 0 disables clipping.
  double grad_clip = 1.0;
  bool freeze_embeddings = false;
  int threads = 1;

  /// Throws ConfigError on inconsistent values.
  void validate() const;
};

struct AdamHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t step = 0;
};

/**
 * One AdamW update. Decoupled weight decay p *= 1 - lr * wd * mask_i is applied
 * before the bias-corrected Adam step; an empty mask decays every coordinate.
 * Increments state.step. Throws NumericError on non-finite gradients.
 */
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double lr, double weight_decay, std::span<const double> decay_mask,
               const AdamHyper& hyper = {});

/// lr_min + (lr_max - lr_min) (1 + cos(pi t / T)) / 2.
double cosine_lr(std::size_t t, std::size_t total, double lr_max, double lr_min);

struct EvalResult {
  double perplexity = 0.0;
  double mean_nll = 0.0;
  std::size_t count = 0;
  double postselection_mean = 0.0;
  double postselection_min = 0.0;
  double postselection_max = 0.0;
  std::vector<double> postselection;  // one per window
  std::vector<double> nll;            // one per window
};

/// exp(mean NLL) over every stride-1 window of `stream`, without dropout.
EvalResult evaluate_perplexity(const QuixerModel& model, const TokenStream& stream,
                               int threads = 1);

/// Perplexity on `eval` targets (positions >= window) of an add-one smoothed
/// unigram model fitted on `train`.
double unigram_perplexity(const TokenStream& train, const TokenStream& eval,
                          std::size_t vocab_size, std::size_t window);

struct EpochMetrics {
  int epoch = 0;
  double train_loss = 0.0;
  double valid_ppl = 0.0;
  double postselection_mean = 0.0;
  double postselection_min = 0.0;
  double postselection_max = 0.0;
  double lr = 0.0;
  double wall_seconds = 0.0;
};

struct MetricsLog {
  std::vector<EpochMetrics> epochs;
};

/// Column order: epoch, train_loss, valid_ppl, postsel_mean, postsel_min,
/// postsel_max, lr. Wall time is left out so reruns are byte-identical.
void write_metrics_csv(const MetricsLog& log, const std::filesystem::path& path);

struct StepRecord {
  std::size_t step = 0;
  int epoch = 0;
  double loss = 0.0;
  double lr = 0.0;
  double grad_norm = 0.0;
};

struct TrainResult {
  QuixerModel best_model;
  MetricsLog log;
  int best_epoch = 0;  // 0 when no epoch ran
};

struct TrainCallbacks {
  std::function<void(const StepRecord&)> on_step;
  std::function<void(const EpochMetrics&)> on_epoch;
};

TrainResult train_model(const QuixerModel& initial, const TokenStream& train,
                        const TokenStream& valid, const TrainConfig& config,
                        const TrainCallbacks& callbacks = {});

}  // namespace quixer
