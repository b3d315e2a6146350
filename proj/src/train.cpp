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

#include "quixer/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <thread>

#include "quixer/errors.hpp"

namespace quixer {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Weight-decay multipliers: everything except the LCU phases and, when
/// frozen, the embedding table.
std::vector<double> decay_mask(const std::vector<Segment>& layout, bool freeze_embeddings) {
  std::vector<double> mask(layout.back().offset + layout.back().length, 1.0);
  for (const Segment& s : layout) {
    if (s.name == "lcu_phases" || (freeze_embeddings && s.name == "embedding")) {
      std::fill_n(mask.begin() + static_cast<std::ptrdiff_t>(s.offset), s.length, 0.0);
    }
  }
  return mask;
}

}  // namespace

void TrainConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("invalid training config: " + what); };
  if (!(std::isfinite(lr_max) && std::isfinite(lr_min))) fail("learning rates must be finite");
  if (!(lr_min > 0.0)) fail("lr_min must be positive");
  if (!(lr_max >= lr_min)) fail("lr_max must be at least lr_min");
  if (epochs < 0) fail("epochs must be nonnegative");
  if (batch_contexts < 1 || targets_per_context < 1 || stride < 1) fail("batch sizes and stride must be positive");
  if (!(weight_decay >= 0.0) || !std::isfinite(weight_decay)) fail("weight_decay must be finite and nonnegative");
  if (!(dropout >= 0.0 && dropout < 1.0)) fail("dropout must lie in [0, 1)");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0 && adam_beta2 >= 0.0 && adam_beta2 < 1.0)) fail("Adam betas must lie in [0, 1)");
  if (!(adam_eps > 0.0)) fail("adam_eps must be positive");
  if (!(grad_clip >= 0.0)) fail("grad_clip must be nonnegative");
  if (threads < 1) fail("threads must be positive");
}

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double lr, double weight_decay, std::span<const double> decay_mask,
               const AdamHyper& hyper) {
  if (grads.size() != params.size() || (!decay_mask.empty() && decay_mask.size() != params.size())) {
    throw DimensionError("Adam parameter, gradient and mask lengths differ");
  }
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (!std::isfinite(grads[i])) {
      throw NumericError("non-finite gradient at flat index " + std::to_string(i));
    }
  }
  if (state.m.empty()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(hyper.beta1, t);
  const double bc2 = 1.0 - std::pow(hyper.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double mask = decay_mask.empty() ? 1.0 : decay_mask[i];
    params[i] *= 1.0 - lr * weight_decay * mask;
    state.m[i] = hyper.beta1 * state.m[i] + (1.0 - hyper.beta1) * grads[i];
    state.v[i] = hyper.beta2 * state.v[i] + (1.0 - hyper.beta2) * grads[i] * grads[i];
    const double m_hat = state.m[i] / bc1;
    const double v_hat = state.v[i] / bc2;
    params[i] -= lr * m_hat / (std::sqrt(v_hat) + hyper.eps);
  }
}

double cosine_lr(std::size_t t, std::size_t total, double lr_max, double lr_min) {
  if (total == 0) throw DimensionError("cosine schedule needs at least one step");
  if (t > total) throw DimensionError("schedule step past the end");
  const double frac = static_cast<double>(t) / static_cast<double>(total);
  return lr_min + 0.5 * (lr_max - lr_min) * (1.0 + std::cos(std::numbers::pi * frac));
}

EvalResult evaluate_perplexity(const QuixerModel& model, const TokenStream& stream, int threads) {
  const WindowView view = windows(stream, model.shape.window, 1);
  EvalResult r;
  r.count = view.size();
  r.nll.assign(r.count, 0.0);
  r.postselection.assign(r.count, 0.0);

  const std::size_t workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(1, threads)), 1, r.count);
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](std::size_t tid) {
    try {
      for (std::size_t i = r.count * tid / workers; i < r.count * (tid + 1) / workers; ++i) {
        const Window w = view[i];
        const ForwardTrace t = forward(model, w.context);
        r.nll[i] = cross_entropy(t.logits, w.target);
        r.postselection[i] = t.postselection_prob;
      }
    } catch (...) {
      errors[tid] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t tid = 0; tid < workers; ++tid) pool.emplace_back(work, tid);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  // sequential sums keep the result independent of the thread count
  double nll = 0.0, ps = 0.0;
  r.postselection_min = std::numeric_limits<double>::infinity();
  r.postselection_max = 0.0;
  for (std::size_t i = 0; i < r.count; ++i) {
    nll += r.nll[i];
    ps += r.postselection[i];
    r.postselection_min = std::min(r.postselection_min, r.postselection[i]);
    r.postselection_max = std::max(r.postselection_max, r.postselection[i]);
  }
  r.mean_nll = nll / static_cast<double>(r.count);
  r.perplexity = std::exp(r.mean_nll);
  r.postselection_mean = ps / static_cast<double>(r.count);
  if (!std::isfinite(r.perplexity)) throw NumericError("non-finite perplexity");
  return r;
}

double unigram_perplexity(const TokenStream& train, const TokenStream& eval,
                          std::size_t vocab_size, std::size_t window) {
  std::vector<double> counts(vocab_size, 1.0);
  for (TokenId id : train.ids) {
    if (id >= vocab_size) throw DimensionError("token id outside vocabulary");
    counts[id] += 1.0;
  }
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (eval.ids.size() <= window) throw DataError("evaluation stream too short");
  double nll = 0.0;
  for (std::size_t i = window; i < eval.ids.size(); ++i) nll -= std::log(counts[eval.ids[i]] / total);
  return std::exp(nll / static_cast<double>(eval.ids.size() - window));
}

void write_metrics_csv(const MetricsLog& log, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write metrics to '" + path.string() + "'");
  out << "epoch,train_loss,valid_ppl,postsel_mean,postsel_min,postsel_max,lr\n";
  for (const auto& e : log.epochs) {
    out << e.epoch << ',' << fmt_double(e.train_loss) << ',' << fmt_double(e.valid_ppl) << ','
        << fmt_double(e.postselection_mean) << ',' << fmt_double(e.postselection_min) << ','
        << fmt_double(e.postselection_max) << ',' << fmt_double(e.lr) << '\n';
  }
}

TrainResult train_model(const QuixerModel& initial, const TokenStream& train,
                        const TokenStream& valid, const TrainConfig& config,
                        const TrainCallbacks& callbacks) {
  config.validate();
  initial.validate();
  TrainResult result{initial, {}, 0};
  if (config.epochs == 0) return result;

  const WindowView view = windows(train, initial.shape.window, config.stride);
  const std::size_t chunk = config.targets_per_context;
  const std::size_t num_chunks = (view.size() + chunk - 1) / chunk;
  const std::size_t steps_per_epoch = (num_chunks + config.batch_contexts - 1) / config.batch_contexts;
  const std::size_t total_steps = steps_per_epoch * static_cast<std::size_t>(config.epochs);

  QuixerModel model = initial;
  ParameterBundle params = flatten(model);
  const std::vector<double> mask = decay_mask(params.segments, config.freeze_embeddings);
  const Segment& emb = params.segment("embedding");
  AdamState adam;
  const AdamHyper hyper{config.adam_beta1, config.adam_beta2, config.adam_eps};

  double best_ppl = std::numeric_limits<double>::infinity();
  std::size_t global_step = 0;
  std::uint64_t examples_seen = 0;
  std::vector<std::size_t> order(num_chunks);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    std::iota(order.begin(), order.end(), 0);
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(epoch)};
    std::mt19937_64 rng(seq);
    std::shuffle(order.begin(), order.end(), rng);

    double loss_sum = 0.0;
    std::size_t loss_count = 0;
    double lr = config.lr_max;
    for (std::size_t s = 0; s < steps_per_epoch; ++s, ++global_step) {
      std::vector<Example> batch;
      for (std::size_t c = s * config.batch_contexts;
           c < std::min(num_chunks, (s + 1) * config.batch_contexts); ++c) {
        const std::size_t first = order[c] * chunk;
        for (std::size_t i = first; i < std::min(view.size(), first + chunk); ++i) {
          batch.push_back(view.example(i));
        }
      }
      GradOptions gopts;
      gopts.dropout = config.dropout;
      gopts.mask_seed = config.seed;
      gopts.mask_offset = examples_seen;
      gopts.threads = config.threads;
      LossAndGrad lg = loss_and_grad(model, batch, gopts);
      examples_seen += batch.size();

      if (config.freeze_embeddings) {
        std::fill_n(lg.grads.values.begin() + static_cast<std::ptrdiff_t>(emb.offset), emb.length, 0.0);
      }
      double norm2 = 0.0;
      for (double g : lg.grads.values) norm2 += g * g;
      const double gnorm = std::sqrt(norm2);
      if (config.grad_clip > 0.0 && gnorm > config.grad_clip) {
        const double scale = config.grad_clip / gnorm;
        for (double& g : lg.grads.values) g *= scale;
      }
      lr = cosine_lr(global_step, total_steps, config.lr_max, config.lr_min);
      adam_step(params.values, lg.grads.values, adam, lr, config.weight_decay, mask, hyper);
      unflatten(params, model);

      loss_sum += lg.loss * static_cast<double>(batch.size());
      loss_count += batch.size();
      if (callbacks.on_step) callbacks.on_step({global_step, epoch, lg.loss, lr, gnorm});
    }

    const EvalResult ev = evaluate_perplexity(model, valid, config.threads);
    EpochMetrics m;
    m.epoch = epoch;
    m.train_loss = loss_sum / static_cast<double>(loss_count);
    m.valid_ppl = ev.perplexity;
    m.postselection_mean = ev.postselection_mean;
    m.postselection_min = ev.postselection_min;
    m.postselection_max = ev.postselection_max;
    m.lr = lr;
    m.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!std::isfinite(m.train_loss)) throw NumericError("non-finite training loss");
    result.log.epochs.push_back(m);
    if (ev.perplexity < best_ppl) {
      best_ppl = ev.perplexity;
      result.best_model = model;
      result.best_epoch = epoch;
    }
    if (callbacks.on_epoch) callbacks.on_epoch(m);
  }
  return result;
}

}  // namespace quixer
