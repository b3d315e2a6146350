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

#include "doctest.h"

#include "quixer/errors.hpp"
#include "quixer/model.hpp"
#include "quixer/qsvt.hpp"
#include "support.hpp"

using namespace quixer;

namespace {

ModelShape small_shape(int q = 3, std::size_t n = 4, int d = 3) {
  ModelShape s;
  s.vocab_size = 11;
  s.embed_dim = 5;
  s.num_qubits = q;
  s.window = n;
  s.degree = d;
  s.ansatz_layers = 1;
  return s;
}

std::vector<TokenId> context_of(std::mt19937_64& rng, const ModelShape& s) {
  std::vector<TokenId> ctx(s.window);
  std::uniform_int_distribution<TokenId> pick(0, static_cast<TokenId>(s.vocab_size - 1));
  for (auto& t : ctx) t = pick(rng);
  return ctx;
}

/// Logits through plain dense matrices: columns of each token unitary come
/// from basis-state images, products and sums are explicit loops.
std::vector<double> dense_logits(const QuixerModel& m, std::span<const TokenId> ctx) {
  const int q = m.shape.num_qubits;
  const std::size_t dim = std::size_t{1} << q;
  using Mat = std::vector<complex_t>;
  auto unitary = [&](const GateCircuit& c, std::span<const double> p) {
    Mat u(dim * dim);
    for (std::size_t col = 0; col < dim; ++col) {
      StateVector img = basis_state(q, col);
      for (const Gate& g : c.gates()) {
        const double th = g.param_slot ? p[*g.param_slot] : 0.0;
        const char axis = (g.kind == GateKind::RY || g.kind == GateKind::CRY) ? 'Y' : 'X';
        img = testing::apply_1q(img, testing::rotation(axis, th), g.target, g.control ? *g.control : -1);
      }
      for (std::size_t r = 0; r < dim; ++r) u[r * dim + col] = img[r];
    }
    return u;
  };
  auto mul = [&](const Mat& a, const Mat& b) {
    Mat c(dim * dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t k = 0; k < dim; ++k)
        for (std::size_t j = 0; j < dim; ++j) c[i * dim + j] += a[i * dim + k] * b[k * dim + j];
    return c;
  };
  double n2 = 0.0;
  for (double a : m.mixer.lcu.raw_amplitudes) n2 += a * a;
  Mat mix(dim * dim);
  for (std::size_t j = 0; j < ctx.size(); ++j) {
    std::vector<double> theta(m.mixer.token_map.rows, 0.0);
    for (std::size_t r = 0; r < theta.size(); ++r)
      for (std::size_t c = 0; c < m.shape.embed_dim; ++c) theta[r] += m.mixer.token_map(r, c) * m.embedding(ctx[j], c);
    const double a = m.mixer.lcu.raw_amplitudes[j];
    const complex_t b = std::polar(a * a / n2, m.mixer.lcu.phases[j]);
    const Mat u = unitary(*m.token_circuit, theta);
    for (std::size_t i = 0; i < dim * dim; ++i) mix[i] += b * u[i];
  }
  Mat poly(dim * dim), power(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) power[i * dim + i] = 1.0;
  for (double c : m.mixer.poly.coefficients) {
    for (std::size_t i = 0; i < dim * dim; ++i) poly[i] += c * power[i];
    power = mul(mix, power);
  }
  const Mat full = mul(unitary(*m.ff_circuit, m.ff_params), poly);
  std::vector<complex_t> psi(dim);
  double norm2 = 0.0;
  for (std::size_t r = 0; r < dim; ++r) norm2 += std::norm(psi[r] = full[r * dim]);
  for (auto& v : psi) v /= std::sqrt(norm2);
  std::vector<double> o;
  for (int axis = 0; axis < 3; ++axis) {
    for (int k = 0; k < q; ++k) {
      double e = 0.0;
      const std::size_t bit = std::size_t{1} << k;
      for (std::size_t i = 0; i < dim; ++i) {
        if (axis == 2) e += std::norm(psi[i]) * ((i & bit) ? -1.0 : 1.0);
        else if (!(i & bit)) {
          const complex_t cross = std::conj(psi[i]) * psi[i | bit];
          e += 2.0 * (axis == 0 ? cross.real() : cross.imag());
        }
      }
      o.push_back(e);
    }
  }
  std::vector<double> h(m.head_w1.rows), logits(m.head_w2.rows);
  for (std::size_t r = 0; r < h.size(); ++r) {
    double acc = m.head_b1[r];
    for (std::size_t c = 0; c < o.size(); ++c) acc += m.head_w1(r, c) * o[c];
    h[r] = acc > 0.0 ? acc : 0.0;
  }
  for (std::size_t r = 0; r < logits.size(); ++r) {
    double acc = m.head_b2[r];
    for (std::size_t c = 0; c < h.size(); ++c) acc += m.head_w2(r, c) * h[c];
    logits[r] = acc;
  }
  return logits;
}

}  // namespace

TEST_CASE("shape validation") {
  ModelShape s = small_shape();
  CHECK_NOTHROW(s.validate());
  CHECK(s.angles_per_token() == 12);
  CHECK(s.readout_dim() == 9);
  CHECK(s.hidden_dim() == 36);
  s.num_qubits = 1;
  CHECK_THROWS_AS(s.validate(), DimensionError);
  s = small_shape();
  s.vocab_size = 0;
  CHECK_THROWS_AS(s.validate(), DimensionError);
}

TEST_CASE("token angles") {
  std::mt19937_64 rng(19);
  QuixerModel m = init_model(small_shape(), 3);
  for (std::size_t c = 0; c < m.shape.embed_dim; ++c) m.embedding(2, c) = 0.0;
  for (double v : token_angles(m, 2)) CHECK(v == 0.0);
  const auto theta = token_angles(m, 5);
  REQUIRE(theta.size() == 12);
  for (std::size_t r = 0; r < theta.size(); ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < m.shape.embed_dim; ++c) acc += m.mixer.token_map(r, c) * m.embedding(5, c);
    CHECK(std::abs(theta[r] - acc) < 1e-14);
  }
  CHECK_THROWS_AS(token_angles(m, 11), DimensionError);
  std::fill(m.mixer.token_map.data.begin(), m.mixer.token_map.data.end(), 0.0);
  for (TokenId t = 0; t < 11; ++t)
    for (double v : token_angles(m, t)) CHECK(v == 0.0);
}

TEST_CASE("readout") {
  const auto zero = readout_expectations(basis_state(3, 0));
  for (int k = 0; k < 3; ++k) {
    CHECK(zero[static_cast<std::size_t>(k)] == doctest::Approx(0.0));
    CHECK(zero[static_cast<std::size_t>(3 + k)] == doctest::Approx(0.0));
    CHECK(zero[static_cast<std::size_t>(6 + k)] == doctest::Approx(1.0));
  }
  StateVector plus(3);
  for (std::size_t i = 0; i < 8; ++i) plus[i] = 1.0 / std::sqrt(8.0);
  const auto o = readout_expectations(plus);
  for (int k = 0; k < 3; ++k) {
    CHECK(o[static_cast<std::size_t>(k)] == doctest::Approx(1.0));
    CHECK(o[static_cast<std::size_t>(3 + k)] == doctest::Approx(0.0));
    CHECK(o[static_cast<std::size_t>(6 + k)] == doctest::Approx(0.0));
  }
  StateVector bad = basis_state(2, 0);
  bad *= complex_t{2.0, 0.0};
  CHECK_THROWS_AS(readout_expectations(bad), NumericError);
}

TEST_CASE("forward trivial cases") {
  QuixerModel m = make_model(small_shape());
  m.mixer.poly.coefficients = {1.0, 0.0, 0.0, 0.0};
  const std::vector<TokenId> ctx{1, 2, 3, 4};
  const ForwardTrace t = forward(m, ctx);
  for (int k = 0; k < 3; ++k) {
    CHECK(t.expectations[static_cast<std::size_t>(k)] == doctest::Approx(0.0));
    CHECK(t.expectations[static_cast<std::size_t>(6 + k)] == doctest::Approx(1.0));
  }
  CHECK(t.postselection_prob == doctest::Approx(1.0));

  CHECK_THROWS_AS(forward(m, std::vector<TokenId>{1, 2}), DimensionError);
  CHECK_THROWS_AS(forward(m, std::vector<TokenId>{1, 2, 3, 11}), DimensionError);

  m.mixer.poly.coefficients = {0.0, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(forward(m, ctx), DegenerateStateError);
}

TEST_CASE("single token: expectations ignore the phase") {
  QuixerModel m = init_model(small_shape(3, 1, 1), 4);
  const std::vector<TokenId> ctx{6};
  const auto before = forward(m, ctx).expectations;
  m.mixer.lcu.phases[0] += 1.1;
  const auto after = forward(m, ctx).expectations;
  for (std::size_t k = 0; k < before.size(); ++k) CHECK(std::abs(before[k] - after[k]) < 1e-12);
}

TEST_CASE("forward matches dense pipeline") {
  std::mt19937_64 rng(20);
  for (int t = 0; t < 8; ++t) {
    ModelShape s = small_shape(2 + t % 2, 1 + static_cast<std::size_t>(t % 4), 1 + t % 3);
    QuixerModel m = init_model(s, static_cast<std::uint64_t>(t));
    for (double& c : m.mixer.poly.coefficients) c = testing::uniform(rng, -1.0, 1.0);
    m.mixer.poly.coefficients[1] = 1.5;
    const auto ctx = context_of(rng, s);
    const ForwardTrace tr = forward(m, ctx);
    const auto ref = dense_logits(m, ctx);
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(tr.logits[i] - ref[i]) < 1e-10);
    CHECK(std::abs(tr.postselection_prob - tr.raw_norm * tr.raw_norm) < 1e-14);
    CHECK(tr.postselection_prob == doctest::Approx(final_postselection_prob(
                                       m.mixer.poly, context_block_encoding(m, m.mixer, ctx))));
    for (double o : tr.expectations) CHECK(std::abs(o) <= 1.0 + 1e-10);
  }
}

TEST_CASE("multi-layer forward") {
  std::mt19937_64 rng(21);
  const ModelShape s = small_shape();
  const QuixerModel m = init_model(s, 5);
  const auto ctx = context_of(rng, s);
  const ForwardTrace one = forward(m, ctx);
  const std::vector<MixerLayer> single{m.mixer};
  CHECK(forward_multilayer(m, single, ctx).logits == one.logits);

  MixerLayer identity = m.mixer;
  identity.poly.coefficients = {1.0, 0.0, 0.0, 0.0};
  const std::vector<MixerLayer> two{m.mixer, identity};
  const auto l2 = forward_multilayer(m, two, ctx).logits;
  for (std::size_t i = 0; i < l2.size(); ++i) CHECK(std::abs(l2[i] - one.logits[i]) < 1e-12);

  // second random layer against P2(M2) applied after P1(M1)
  MixerLayer second = init_model(s, 6).mixer;
  second.poly.coefficients = {0.2, 0.9, -0.3, 0.1};
  const std::vector<MixerLayer> stack{m.mixer, second};
  const ForwardTrace tr = forward_multilayer(m, stack, ctx);
  StateVector v = apply_polynomial(m.mixer.poly, context_block_encoding(m, m.mixer, ctx), basis_state(3, 0));
  v = apply_polynomial(second.poly, context_block_encoding(m, second, ctx), v);
  CHECK(std::abs(tr.raw_norm - v.norm()) < 1e-12);
  v *= complex_t{1.0 / v.norm(), 0.0};
  CHECK(testing::max_diff(tr.normalized_state, v) < 1e-12);

  CHECK_THROWS_AS(forward_multilayer(m, std::span<const MixerLayer>{}, ctx), DimensionError);
}

TEST_CASE("forward is deterministic") {
  std::mt19937_64 rng(22);
  const QuixerModel m = init_model(small_shape(), 7);
  const auto ctx = context_of(rng, m.shape);
  CHECK(forward(m, ctx).logits == forward(m, ctx).logits);
}

TEST_CASE("initialization ranges") {
  ModelShape s = small_shape();
  s.ansatz_layers = 2;
  const QuixerModel m = init_model(s, 11);
  CHECK_NOTHROW(m.validate());
  CHECK(m.mixer.poly.coefficients == std::vector<double>{0.0, 1.0, 0.0, 0.0});
  for (double a : m.mixer.lcu.raw_amplitudes) CHECK((a >= 0.5 && a <= 1.5));
  for (double g : m.mixer.lcu.phases) CHECK(std::abs(g) <= std::numbers::pi);
  for (double p : m.ff_params) CHECK(std::abs(p) <= std::numbers::pi);
  const double w1 = 1.0 / std::sqrt(static_cast<double>(s.readout_dim()));
  for (double w : m.head_w1.data) CHECK(std::abs(w) <= w1);
  const double we = 1.0 / std::sqrt(static_cast<double>(s.embed_dim));
  for (double w : m.mixer.token_map.data) CHECK(std::abs(w) <= we);
  CHECK(init_model(s, 11).head_w2 == m.head_w2);
  CHECK_FALSE(init_model(s, 12).head_w2 == m.head_w2);
}
