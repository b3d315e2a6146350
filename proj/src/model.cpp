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

#include "quixer/model.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "quixer/errors.hpp"

namespace quixer {

namespace {

void check(bool ok, const std::string& what) {
  if (!ok) throw DimensionError("model shape mismatch: " + what);
}

void fill_uniform(std::span<double> values, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(lo, hi);
  for (double& v : values) v = dist(rng);
}

void check_layer(const ModelShape& shape, const MixerLayer& layer) {
  check(layer.token_map.rows == shape.angles_per_token() &&
            layer.token_map.cols == shape.embed_dim &&
            layer.token_map.data.size() == layer.token_map.rows * layer.token_map.cols,
        "token map");
  check(layer.lcu.raw_amplitudes.size() == shape.window && layer.lcu.phases.size() == shape.window,
        "LCU coefficients");
  check(layer.poly.degree() == shape.degree, "polynomial degree");
}

/// Shared tail of forward(): normalization, U_FF, readout and head.
void finish_forward(const QuixerModel& model, const ForwardOptions& options, ForwardTrace& t) {
  t.postselection_prob = t.raw_state.norm_squared();
  t.raw_norm = std::sqrt(t.postselection_prob);
  if (!(t.raw_norm >= kDegenerateNorm)) {
    throw DegenerateStateError("polynomial-transformed state has norm " +
                               std::to_string(t.raw_norm) + ", below " +
                               std::to_string(kDegenerateNorm));
  }
  t.normalized_state = t.raw_state;
  t.normalized_state *= 1.0 / t.raw_norm;
  t.final_state = apply_circuit(*model.ff_circuit, model.ff_params, t.normalized_state);
  t.expectations = readout_expectations(t.final_state);

  const std::size_t hidden = model.shape.hidden_dim();
  t.hidden_pre.assign(hidden, 0.0);
  matvec(model.head_w1, t.expectations, t.hidden_pre);
  t.hidden.resize(hidden);
  for (std::size_t h = 0; h < hidden; ++h) {
    const double pre = t.hidden_pre[h] + model.head_b1[h];
    t.hidden_pre[h] = pre;
    t.hidden[h] = pre > 0.0 ? pre : 0.0;
  }
  if (!options.dropout_scale.empty()) {
    if (options.dropout_scale.size() != hidden) throw DimensionError("dropout mask length");
    for (std::size_t h = 0; h < hidden; ++h) t.hidden[h] *= options.dropout_scale[h];
  }
  t.logits.assign(model.shape.vocab_size, 0.0);
  matvec(model.head_w2, t.hidden, t.logits);
  for (std::size_t v = 0; v < t.logits.size(); ++v) t.logits[v] += model.head_b2[v];
}

}  // namespace

void ModelShape::validate() const {
  if (vocab_size < 1) throw DimensionError("vocabulary must be nonempty");
  if (embed_dim < 1) throw DimensionError("embedding dimension must be positive");
  if (num_qubits < 2 || num_qubits > 20) throw DimensionError("qubit count must be in [2, 20]");
  if (window < 1) throw DimensionError("window must be positive");
  if (degree < 1) throw DimensionError("polynomial degree must be at least 1");
  if (ansatz_layers < 1) throw DimensionError("ansatz needs at least one layer");
}

void QuixerModel::validate() const {
  shape.validate();
  check(token_circuit && token_circuit->num_qubits() == shape.num_qubits &&
            token_circuit->num_params() == shape.angles_per_token(),
        "token circuit");
  check(ff_circuit && ff_circuit->num_qubits() == shape.num_qubits &&
            ff_params.size() == ff_circuit->num_params(),
        "feed-forward circuit");
  check(embedding.rows == shape.vocab_size && embedding.cols == shape.embed_dim, "embedding");
  check_layer(shape, mixer);
  const std::size_t hidden = shape.hidden_dim();
  check(head_w1.rows == hidden && head_w1.cols == shape.readout_dim(), "head_w1");
  check(head_b1.size() == hidden, "head_b1");
  check(head_w2.rows == shape.vocab_size && head_w2.cols == hidden, "head_w2");
  check(head_b2.size() == shape.vocab_size, "head_b2");
}

QuixerModel make_model(const ModelShape& shape) {
  shape.validate();
  QuixerModel m;
  m.shape = shape;
  m.token_circuit = std::make_shared<const GateCircuit>(circuit14(shape.num_qubits, shape.ansatz_layers));
  m.ff_circuit = m.token_circuit;
  m.embedding = Matrix(shape.vocab_size, shape.embed_dim);
  m.mixer.token_map = Matrix(shape.angles_per_token(), shape.embed_dim);
  m.mixer.lcu.raw_amplitudes.assign(shape.window, 1.0);
  m.mixer.lcu.phases.assign(shape.window, 0.0);
  m.mixer.poly.coefficients.assign(static_cast<std::size_t>(shape.degree) + 1, 0.0);
  m.mixer.poly.coefficients[1] = 1.0;
  m.ff_params.assign(m.ff_circuit->num_params(), 0.0);
  const std::size_t hidden = shape.hidden_dim();
  m.head_w1 = Matrix(hidden, shape.readout_dim());
  m.head_b1.assign(hidden, 0.0);
  m.head_w2 = Matrix(shape.vocab_size, hidden);
  m.head_b2.assign(shape.vocab_size, 0.0);
  return m;
}

QuixerModel init_model(const ModelShape& shape, std::uint64_t seed) {
  QuixerModel m = make_model(shape);
  std::mt19937_64 rng(seed);
  constexpr double pi = std::numbers::pi;

  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : m.embedding.data) v = normal(rng);
  const double we = 1.0 / std::sqrt(static_cast<double>(shape.embed_dim));
  fill_uniform(m.mixer.token_map.data, -we, we, rng);
  fill_uniform(m.mixer.lcu.raw_amplitudes, 0.5, 1.5, rng);
  fill_uniform(m.mixer.lcu.phases, -pi, pi, rng);
  fill_uniform(m.ff_params, -pi, pi, rng);
  const double w1 = 1.0 / std::sqrt(static_cast<double>(shape.readout_dim()));
  fill_uniform(m.head_w1.data, -w1, w1, rng);
  fill_uniform(m.head_b1, -w1, w1, rng);
  const double w2 = 1.0 / std::sqrt(static_cast<double>(shape.hidden_dim()));
  fill_uniform(m.head_w2.data, -w2, w2, rng);
  fill_uniform(m.head_b2, -w2, w2, rng);
  return m;
}

std::vector<double> token_angles(const QuixerModel& model, TokenId token) {
  if (token >= model.shape.vocab_size) {
    throw DimensionError("token id " + std::to_string(token) + " outside vocabulary of size " +
                         std::to_string(model.shape.vocab_size));
  }
  std::vector<double> theta(model.mixer.token_map.rows, 0.0);
  matvec(model.mixer.token_map, model.embedding.row(token), theta);
  return theta;
}

BlockEncodingSpec context_block_encoding(const QuixerModel& model, const MixerLayer& layer,
                                         std::span<const TokenId> context) {
  if (context.size() != model.shape.window) {
    throw DimensionError("context has " + std::to_string(context.size()) +
                         " tokens, model window is " + std::to_string(model.shape.window));
  }
  BlockEncodingSpec spec;
  spec.coeffs = layer.lcu;
  spec.token_circuits.assign(context.size(), model.token_circuit);
  spec.token_params.reserve(context.size());
  for (TokenId tok : context) {
    if (tok >= model.shape.vocab_size) {
      throw DimensionError("token id " + std::to_string(tok) + " outside vocabulary");
    }
    std::vector<double> theta(layer.token_map.rows, 0.0);
    matvec(layer.token_map, model.embedding.row(tok), theta);
    spec.token_params.push_back(std::move(theta));
  }
  return spec;
}

std::vector<double> readout_expectations(const StateVector& state) {
  if (!state.is_normalized(1e-8)) {
    throw NumericError("readout needs a normalized state, norm is " +
                       std::to_string(state.norm()));
  }
  const int q = state.num_qubits();
  std::vector<double> out;
  out.reserve(3 * static_cast<std::size_t>(q));
  for (PauliAxis axis : {PauliAxis::X, PauliAxis::Y, PauliAxis::Z})
    for (int k = 0; k < q; ++k) out.push_back(expectation(state, {axis, k}));
  return out;
}

ForwardTrace forward(const QuixerModel& model, std::span<const TokenId> context,
                     const ForwardOptions& options) {
  model.validate();
  BlockEncodingSpec spec = context_block_encoding(model, model.mixer, context);
  ForwardTrace t;
  t.mix_weights = effective_coefficients(spec.coeffs);

  const int d = model.shape.degree;
  t.powers.reserve(static_cast<std::size_t>(d) + 1);
  t.powers.push_back(basis_state(model.shape.num_qubits, 0));
  if (options.keep_images) t.images.resize(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    StateVector next(model.shape.num_qubits);
    for (std::size_t j = 0; j < spec.size(); ++j) {
      StateVector image = apply_circuit(*model.token_circuit, spec.token_params[j], t.powers.back());
      axpy_inplace(t.mix_weights[j], image, next);
      if (options.keep_images) t.images[static_cast<std::size_t>(k)].push_back(std::move(image));
    }
    t.powers.push_back(std::move(next));
  }
  t.raw_state = combine_powers(model.mixer.poly, t.powers);
  t.token_params = std::move(spec.token_params);
  finish_forward(model, options, t);
  return t;
}

ForwardTrace forward_multilayer(const QuixerModel& model, std::span<const MixerLayer> layers,
                                std::span<const TokenId> context) {
  model.validate();
  if (layers.empty()) throw DimensionError("multi-layer forward needs at least one layer");
  ForwardTrace t;
  StateVector state = basis_state(model.shape.num_qubits, 0);
  for (const MixerLayer& layer : layers) {
    check_layer(model.shape, layer);
    const BlockEncodingSpec spec = context_block_encoding(model, layer, context);
    state = apply_polynomial(layer.poly, spec, state);
  }
  t.raw_state = std::move(state);
  finish_forward(model, {}, t);
  return t;
}

}  // namespace quixer
