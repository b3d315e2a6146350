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

#include "quixer/grad.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

#include "quixer/errors.hpp"

namespace quixer {

namespace {

std::span<double> seg(std::vector<double>& values, const Segment& s) {
  return {values.data() + s.offset, s.length};
}

const Segment& find_segment(const std::vector<Segment>& segments, const std::string& name) {
  for (const auto& s : segments)
    if (s.name == name) return s;
  throw DimensionError("no parameter segment named '" + name + "'");
}

/// Indices into the segment list, in parameter_layout order.
enum SegmentIndex : std::size_t {
  kEmbedding, kTokenMap, kLcuAmplitudes, kLcuPhases, kPolyCoeffs,
  kFfParams, kHeadW1, kHeadB1, kHeadW2, kHeadB2, kSegmentCount
};

/// Accumulates the gradient of one example's loss, scaled by `weight`, into `g`.
double backprop_example(const QuixerModel& model, const Example& ex, double weight,
                        std::span<const double> mask, const std::vector<Segment>& layout,
                        std::vector<double>& g, double& postselection) {
  ForwardOptions opts;
  opts.dropout_scale = mask;
  opts.keep_images = true;
  const ForwardTrace t = forward(model, ex.context, opts);
  postselection = t.postselection_prob;
  const double loss = cross_entropy(t.logits, ex.target);

  const ModelShape& shape = model.shape;
  const std::size_t V = shape.vocab_size;
  const std::size_t H = shape.hidden_dim();
  const int q = shape.num_qubits;

  // softmax cross-entropy
  std::vector<double> dlogits(V);
  const double mx = *std::max_element(t.logits.begin(), t.logits.end());
  double z = 0.0;
  for (std::size_t v = 0; v < V; ++v) z += std::exp(t.logits[v] - mx);
  for (std::size_t v = 0; v < V; ++v) dlogits[v] = weight * std::exp(t.logits[v] - mx) / z;
  dlogits[ex.target] -= weight;

  // head
  outer_add(dlogits, t.hidden, seg(g, layout[kHeadW2]));
  {
    auto b2 = seg(g, layout[kHeadB2]);
    for (std::size_t v = 0; v < V; ++v) b2[v] += dlogits[v];
  }
  std::vector<double> dhidden(H, 0.0);
  matvec_transposed_add(model.head_w2, dlogits, dhidden);
  for (std::size_t h = 0; h < H; ++h) {
    if (!mask.empty()) dhidden[h] *= mask[h];
    if (!(t.hidden_pre[h] > 0.0)) dhidden[h] = 0.0;
  }
  outer_add(dhidden, t.expectations, seg(g, layout[kHeadW1]));
  {
    auto b1 = seg(g, layout[kHeadB1]);
    for (std::size_t h = 0; h < H; ++h) b1[h] += dhidden[h];
  }
  std::vector<double> dexp(shape.readout_dim(), 0.0);
  matvec_transposed_add(model.head_w1, dhidden, dexp);

  // readout: g_psi = 2 sum_k dL/do_k O_k psi
  StateVector g_psi(q);
  std::size_t k = 0;
  for (PauliAxis axis : {PauliAxis::X, PauliAxis::Y, PauliAxis::Z})
    for (int qb = 0; qb < q; ++qb, ++k) {
      if (dexp[k] == 0.0) continue;
      axpy_inplace(2.0 * dexp[k], apply_pauli({axis, qb}, t.final_state), g_psi);
    }

  // U_FF
  const StateVector g_phi = backprop_circuit(*model.ff_circuit, model.ff_params, t.final_state,
                                             std::move(g_psi), seg(g, layout[kFfParams]));

  // phi = r / ||r||
  StateVector g_raw = g_phi;
  axpy_inplace(-inner_product(t.normalized_state, g_phi).real(), t.normalized_state, g_raw);
  g_raw *= 1.0 / t.raw_norm;

  // polynomial coefficients
  const auto& c = model.mixer.poly.coefficients;
  const int d = shape.degree;
  {
    auto gc = seg(g, layout[kPolyCoeffs]);
    for (std::size_t i = 0; i < c.size(); ++i) gc[i] += inner_product(g_raw, t.powers[i]).real();
  }

  // power chain v_{k+1} = M v_k, walked backwards
  const std::size_t n = shape.window;
  const std::size_t P = shape.angles_per_token();
  std::vector<double> g_theta(n * P, 0.0);
  std::vector<complex_t> s(n, complex_t{0.0, 0.0});  // sum_k <w_{k+1}, U_j v_k>
  StateVector w = g_raw;
  w *= c[static_cast<std::size_t>(d)];
  for (int kk = d - 1; kk >= 0; --kk) {
    StateVector w_prev = g_raw;
    w_prev *= c[static_cast<std::size_t>(kk)];
    const auto& images = t.images[static_cast<std::size_t>(kk)];
    for (std::size_t j = 0; j < n; ++j) {
      s[j] += inner_product(w, images[j]);
      StateVector lambda = w;
      lambda *= std::conj(t.mix_weights[j]);
      const StateVector back = backprop_circuit(*model.token_circuit, t.token_params[j], images[j],
                                                std::move(lambda),
                                                std::span<double>(g_theta.data() + j * P, P));
      axpy_inplace(1.0, back, w_prev);
    }
    w = std::move(w_prev);
  }

  // LCU weights b_j = exp(i gamma_j) a_j^2, a = raw / ||raw||
  {
    const auto& lcu = model.mixer.lcu;
    const std::vector<double> a = normalized_amplitudes(lcu);
    double raw_norm2 = 0.0;
    for (double r : lcu.raw_amplitudes) raw_norm2 += r * r;
    const double raw_norm = std::sqrt(raw_norm2);
    auto g_gamma = seg(g, layout[kLcuPhases]);
    auto g_raw_amp = seg(g, layout[kLcuAmplitudes]);
    std::vector<double> g_a(n);
    double dot = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      g_gamma[j] += -(t.mix_weights[j] * s[j]).imag();
      g_a[j] = (2.0 * a[j] * std::polar(1.0, lcu.phases[j]) * s[j]).real();
      dot += a[j] * g_a[j];
    }
    for (std::size_t j = 0; j < n; ++j) g_raw_amp[j] += (g_a[j] - a[j] * dot) / raw_norm;
  }

  // theta_j = W_E e(w_j)
  auto g_map = seg(g, layout[kTokenMap]);
  auto g_emb = seg(g, layout[kEmbedding]);
  const std::size_t E = shape.embed_dim;
  for (std::size_t j = 0; j < n; ++j) {
    std::span<const double> gt(g_theta.data() + j * P, P);
    const TokenId tok = ex.context[j];
    outer_add(gt, model.embedding.row(tok), g_map);
    matvec_transposed_add(model.mixer.token_map, gt, g_emb.subspan(tok * E, E));
  }
  return loss;
}

void check_batch(const QuixerModel& model, std::span<const Example> batch) {
  if (batch.empty()) throw DimensionError("empty batch");
  for (const Example& ex : batch) {
    if (ex.target >= model.shape.vocab_size) {
      throw DimensionError("target id " + std::to_string(ex.target) + " outside vocabulary");
    }
  }
}

}  // namespace

const Segment& ParameterBundle::segment(const std::string& name) const {
  return find_segment(segments, name);
}

const Segment& GradientBundle::segment(const std::string& name) const {
  return find_segment(segments, name);
}

std::span<const double> GradientBundle::view(const std::string& name) const {
  const Segment& s = segment(name);
  return {values.data() + s.offset, s.length};
}

std::vector<Segment> parameter_layout(const ModelShape& shape) {
  const std::size_t hidden = shape.hidden_dim();
  const std::size_t ff = shape.angles_per_token();
  const std::pair<const char*, std::size_t> sizes[] = {
      {"embedding", shape.vocab_size * shape.embed_dim},
      {"token_map", shape.angles_per_token() * shape.embed_dim},
      {"lcu_amplitudes", shape.window},
      {"lcu_phases", shape.window},
      {"poly_coeffs", static_cast<std::size_t>(shape.degree) + 1},
      {"ff_params", ff},
      {"head_w1", hidden * shape.readout_dim()},
      {"head_b1", hidden},
      {"head_w2", shape.vocab_size * hidden},
      {"head_b2", shape.vocab_size},
  };
  std::vector<Segment> out;
  std::size_t offset = 0;
  for (const auto& [name, len] : sizes) {
    out.push_back({name, offset, len});
    offset += len;
  }
  return out;
}

ParameterBundle flatten(const QuixerModel& model) {
  model.validate();
  ParameterBundle b;
  b.segments = parameter_layout(model.shape);
  b.values.reserve(b.segments.back().offset + b.segments.back().length);
  auto append = [&](std::span<const double> v) { b.values.insert(b.values.end(), v.begin(), v.end()); };
  append(model.embedding.data);
  append(model.mixer.token_map.data);
  append(model.mixer.lcu.raw_amplitudes);
  append(model.mixer.lcu.phases);
  append(model.mixer.poly.coefficients);
  append(model.ff_params);
  append(model.head_w1.data);
  append(model.head_b1);
  append(model.head_w2.data);
  append(model.head_b2);
  return b;
}

void unflatten(const ParameterBundle& bundle, QuixerModel& model) {
  model.validate();
  const auto layout = parameter_layout(model.shape);
  if (bundle.values.size() != layout.back().offset + layout.back().length) {
    throw DimensionError("parameter bundle does not match model shape");
  }
  std::size_t i = 0;
  auto take = [&](std::vector<double>& dst) {
    const Segment& s = layout[i++];
    std::copy_n(bundle.values.begin() + static_cast<std::ptrdiff_t>(s.offset), s.length, dst.begin());
  };
  take(model.embedding.data);
  take(model.mixer.token_map.data);
  take(model.mixer.lcu.raw_amplitudes);
  take(model.mixer.lcu.phases);
  take(model.mixer.poly.coefficients);
  take(model.ff_params);
  take(model.head_w1.data);
  take(model.head_b1);
  take(model.head_w2.data);
  take(model.head_b2);
}

double cross_entropy(std::span<const double> logits, TokenId target) {
  if (target >= logits.size()) throw DimensionError("target outside logits");
  const double mx = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double l : logits) z += std::exp(l - mx);
  return mx + std::log(z) - logits[target];
}

std::vector<double> dropout_mask(std::size_t hidden, double rate, std::uint64_t seed,
                                 std::uint64_t example_index) {
  if (!(rate >= 0.0 && rate < 1.0)) throw DimensionError("dropout rate must be in [0, 1)");
  std::vector<double> mask(hidden, 1.0);
  if (rate == 0.0) return mask;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(example_index),
                    static_cast<std::uint32_t>(example_index >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double keep = 1.0 / (1.0 - rate);
  for (double& m : mask) m = u(rng) < rate ? 0.0 : keep;
  return mask;
}

LossAndGrad loss_and_grad(const QuixerModel& model, std::span<const Example> batch,
                          const GradOptions& options) {
  model.validate();
  check_batch(model, batch);
  const auto layout = parameter_layout(model.shape);
  const std::size_t total = layout.back().offset + layout.back().length;
  const double weight = 1.0 / static_cast<double>(batch.size());
  const std::size_t hidden = model.shape.hidden_dim();

  const std::size_t threads =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(1, options.threads)), 1, batch.size());
  // contiguous chunks, reduced in chunk order
  std::vector<std::vector<double>> partial(threads, std::vector<double>(total, 0.0));
  std::vector<double> losses(batch.size(), 0.0);
  std::vector<double> post(batch.size(), 0.0);
  std::vector<std::exception_ptr> errors(threads);

  auto work = [&](std::size_t tid) {
    const std::size_t begin = batch.size() * tid / threads;
    const std::size_t end = batch.size() * (tid + 1) / threads;
    try {
      for (std::size_t i = begin; i < end; ++i) {
        std::vector<double> mask;
        if (options.dropout > 0.0) {
          mask = dropout_mask(hidden, options.dropout, options.mask_seed, options.mask_offset + i);
        }
        losses[i] = backprop_example(model, batch[i], weight, mask, layout, partial[tid], post[i]);
      }
    } catch (...) {
      errors[tid] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t tid = 0; tid < threads; ++tid) pool.emplace_back(work, tid);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  LossAndGrad out;
  out.grads.segments = layout;
  out.grads.values = std::move(partial[0]);
  for (std::size_t tid = 1; tid < threads; ++tid)
    for (std::size_t i = 0; i < total; ++i) out.grads.values[i] += partial[tid][i];
  double acc = 0.0;
  for (double l : losses) acc += l;
  out.loss = acc * weight;
  out.postselection = std::move(post);
  for (double v : out.grads.values) {
    if (!std::isfinite(v)) throw NumericError("non-finite gradient");
  }
  if (!std::isfinite(out.loss)) throw NumericError("non-finite loss");
  return out;
}

double batch_loss(const QuixerModel& model, std::span<const Example> batch) {
  check_batch(model, batch);
  double acc = 0.0;
  for (const Example& ex : batch) acc += cross_entropy(forward(model, ex.context).logits, ex.target);
  return acc / static_cast<double>(batch.size());
}

double FiniteDifferenceReport::worst() const {
  double w = 0.0;
  for (const auto& s : segments)
    if (!s.skipped) w = std::max(w, s.max_rel_error);
  return w;
}

double gradient_relative_error(double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
  return std::abs(analytic - numeric) / denom;
}

FiniteDifferenceReport finite_difference_check(const QuixerModel& model,
                                               std::span<const Example> batch, double epsilon,
                                               std::size_t samples, std::uint64_t seed) {
  if (!(epsilon >= 1e-7 && epsilon <= 1e-3)) {
    throw DimensionError("finite-difference epsilon must lie in [1e-7, 1e-3]");
  }
  const LossAndGrad analytic = loss_and_grad(model, batch);
  const ParameterBundle base = flatten(model);
  std::mt19937_64 rng(seed);
  FiniteDifferenceReport report;
  QuixerModel probe = model;
  for (const Segment& s : base.segments) {
    SegmentCheck check;
    check.name = s.name;
    if (s.length == 0 || samples == 0) {
      check.skipped = true;
      check.note = s.length == 0 ? "segment has no parameters" : "no samples requested";
      report.segments.push_back(check);
      continue;
    }
    std::vector<std::size_t> idx(s.length);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(std::min(samples, s.length));
    for (std::size_t local : idx) {
      const std::size_t i = s.offset + local;
      ParameterBundle p = base;
      p.values[i] = base.values[i] + epsilon;
      unflatten(p, probe);
      const double up = batch_loss(probe, batch);
      p.values[i] = base.values[i] - epsilon;
      unflatten(p, probe);
      const double down = batch_loss(probe, batch);
      const double numeric = (up - down) / (2.0 * epsilon);
      check.max_rel_error =
          std::max(check.max_rel_error, gradient_relative_error(analytic.grads.values[i], numeric));
      ++check.sampled;
    }
    report.segments.push_back(check);
  }
  return report;
}

}  // namespace quixer
