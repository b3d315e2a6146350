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

#include <filesystem>
#include <fstream>

#include "quixer/errors.hpp"
#include "quixer/train.hpp"
#include "support.hpp"

using namespace quixer;

namespace {

ModelShape small_shape(std::size_t vocab) {
  ModelShape s;
  s.vocab_size = vocab;
  s.embed_dim = 4;
  s.num_qubits = 2;
  s.window = 3;
  s.degree = 2;
  s.ansatz_layers = 1;
  s.head_hidden = 6;
  return s;
}

TokenStream random_stream(std::mt19937_64& rng, std::size_t length, TokenId vocab) {
  std::uniform_int_distribution<TokenId> pick(0, vocab - 1);
  TokenStream s;
  s.ids.resize(length);
  for (auto& t : s.ids) t = pick(rng);
  return s;
}

/// Textbook AdamW with decoupled decay, one parameter at a time.
struct ScalarAdam {
  double m = 0.0, v = 0.0;
  int t = 0;
  double step(double p, double g, double lr, double wd) {
    ++t;
    p -= lr * wd * p;
    m = 0.9 * m + 0.1 * g;
    v = 0.999 * v + 0.001 * g * g;
    const double mh = m / (1.0 - std::pow(0.9, t));
    const double vh = v / (1.0 - std::pow(0.999, t));
    return p - lr * mh / (std::sqrt(vh) + 1e-8);
  }
};

}  // namespace

TEST_CASE("adam with zero gradient and no decay leaves parameters") {
  std::vector<double> p{0.5, -1.0, 2.0};
  const std::vector<double> g(3, 0.0);
  AdamState st;
  for (int i = 0; i < 5; ++i) adam_step(p, g, st, 0.1, 0.0, {});
  CHECK(p == std::vector<double>{0.5, -1.0, 2.0});
  CHECK(st.step == 5);
}

TEST_CASE("adam first step moves by lr") {
  std::vector<double> p{1.0, 1.0};
  const std::vector<double> g{3.0, -0.2};
  AdamState st;
  adam_step(p, g, st, 0.01, 0.0, {});
  CHECK(p[0] == doctest::Approx(0.99).epsilon(1e-9));
  CHECK(p[1] == doctest::Approx(1.01).epsilon(1e-9));
}

TEST_CASE("adam matches scalar reference") {
  std::mt19937_64 rng(1);
  std::vector<double> p(6), ref(6);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = ref[i] = testing::uniform(rng, -1.0, 1.0);
  const std::vector<double> mask{1, 1, 0, 1, 0, 1};
  std::vector<ScalarAdam> scalar(6);
  AdamState st;
  for (int step = 0; step < 20; ++step) {
    std::vector<double> g(6);
    for (double& x : g) x = testing::uniform(rng, -2.0, 2.0);
    adam_step(p, g, st, 0.05, 0.1, mask);
    for (std::size_t i = 0; i < p.size(); ++i) ref[i] = scalar[i].step(ref[i], g[i], 0.05, 0.1 * mask[i]);
  }
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(p[i] - ref[i]) < 1e-12);

  std::vector<double> bad{std::nan("")};
  std::vector<double> one{0.0};
  AdamState fresh;
  CHECK_THROWS_AS(adam_step(one, bad, fresh, 0.1, 0.0, {}), NumericError);
  const std::vector<double> none;
  CHECK_THROWS_AS(adam_step(one, none, fresh, 0.1, 0.0, {}), DimensionError);
}

TEST_CASE("cosine schedule") {
  CHECK(cosine_lr(0, 10, 1e-2, 1e-4) == doctest::Approx(1e-2));
  CHECK(cosine_lr(5, 10, 1e-2, 1e-4) == doctest::Approx(0.5 * (1e-2 + 1e-4)));
  CHECK(cosine_lr(10, 10, 1e-2, 1e-4) == doctest::Approx(1e-4));
  double prev = 1.0;
  for (std::size_t t = 0; t <= 50; ++t) {
    const double lr = cosine_lr(t, 50, 1e-3, 1e-5);
    CHECK(lr <= prev);
    prev = lr;
  }
  CHECK_THROWS_AS(cosine_lr(0, 0, 1.0, 0.1), DimensionError);
  CHECK_THROWS_AS(cosine_lr(11, 10, 1.0, 0.1), DimensionError);
}

TEST_CASE("config validation") {
  TrainConfig c;
  CHECK_NOTHROW(c.validate());
  c.lr_min = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = TrainConfig{};
  c.dropout = 1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = TrainConfig{};
  c.targets_per_context = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("uniform logits give perplexity V") {
  QuixerModel m = make_model(small_shape(7));
  std::mt19937_64 rng(2);
  const TokenStream s = random_stream(rng, 40, 7);
  const EvalResult r = evaluate_perplexity(m, s);
  CHECK(r.count == 37);
  CHECK(r.perplexity == doctest::Approx(7.0));
  CHECK(r.mean_nll == doctest::Approx(std::log(7.0)));
  CHECK(r.postselection_mean == doctest::Approx(1.0));
}

TEST_CASE("evaluation is deterministic and matches a direct pass") {
  const QuixerModel m = init_model(small_shape(7), 3);
  std::mt19937_64 rng(4);
  const TokenStream s = random_stream(rng, 30, 7);
  const EvalResult a = evaluate_perplexity(m, s, 1);
  const EvalResult b = evaluate_perplexity(m, s, 3);
  CHECK(a.nll == b.nll);
  CHECK(a.postselection == b.postselection);
  CHECK(a.perplexity == b.perplexity);

  double sum = 0.0, pmin = 2.0, pmax = 0.0;
  for (std::size_t i = 3; i < s.ids.size(); ++i) {
    const std::vector<TokenId> ctx(s.ids.begin() + static_cast<std::ptrdiff_t>(i - 3),
                                   s.ids.begin() + static_cast<std::ptrdiff_t>(i));
    const ForwardTrace t = forward(m, ctx);
    const double nll = cross_entropy(t.logits, s.ids[i]);
    CHECK(std::abs(nll - a.nll[i - 3]) < 1e-12);
    sum += nll;
    pmin = std::min(pmin, t.postselection_prob);
    pmax = std::max(pmax, t.postselection_prob);
  }
  CHECK(a.mean_nll == doctest::Approx(sum / 27.0));
  CHECK(a.perplexity == doctest::Approx(std::exp(sum / 27.0)));
  CHECK(a.postselection_min == doctest::Approx(pmin));
  CHECK(a.postselection_max == doctest::Approx(pmax));
}

TEST_CASE("unigram baseline") {
  TokenStream train, eval;
  train.ids = {0, 0, 1};
  eval.ids = {2, 2, 0, 1};
  // add-one counts 3, 2, 1 over total 6; targets after a window of 2 are 0 and 1
  const double expect = std::exp(-(std::log(3.0 / 6.0) + std::log(2.0 / 6.0)) / 2.0);
  CHECK(unigram_perplexity(train, eval, 3, 2) == doctest::Approx(expect));
  CHECK_THROWS_AS(unigram_perplexity(train, eval, 3, 4), DataError);
}

TEST_CASE("zero epochs returns the initial model") {
  const QuixerModel m = init_model(small_shape(5), 5);
  std::mt19937_64 rng(6);
  const TokenStream s = random_stream(rng, 20, 5);
  TrainConfig c;
  c.epochs = 0;
  const TrainResult r = train_model(m, s, s, c);
  CHECK(r.best_epoch == 0);
  CHECK(r.log.epochs.empty());
  CHECK(flatten(r.best_model).values == flatten(m).values);
}

TEST_CASE("short training run") {
  const QuixerModel m = init_model(small_shape(5), 7);
  std::mt19937_64 rng(8);
  TokenStream train;
  for (int i = 0; i < 60; ++i) train.ids.push_back(static_cast<TokenId>(i % 5));
  const TokenStream valid = train;
  TrainConfig c;
  c.epochs = 3;
  c.batch_contexts = 4;
  c.targets_per_context = 2;
  c.lr_max = 0.05;
  c.lr_min = 0.001;
  c.seed = 9;
  std::size_t steps = 0;
  TrainCallbacks cb;
  cb.on_step = [&](const StepRecord& r) {
    CHECK(r.step == steps);
    ++steps;
  };
  const TrainResult a = train_model(m, train, valid, c, cb);
  // 57 windows in chunks of 2 -> 29 chunks -> 8 steps per epoch
  CHECK(steps == 24);
  REQUIRE(a.log.epochs.size() == 3);
  CHECK(a.log.epochs.back().lr == doctest::Approx(cosine_lr(23, 24, 0.05, 0.001)));
  CHECK(a.log.epochs.back().valid_ppl < evaluate_perplexity(m, valid).perplexity);
  CHECK(a.best_epoch >= 1);

  const TrainResult b = train_model(m, train, valid, c);
  CHECK(flatten(a.best_model).values == flatten(b.best_model).values);
  for (std::size_t e = 0; e < 3; ++e) CHECK(a.log.epochs[e].train_loss == b.log.epochs[e].train_loss);

  c.freeze_embeddings = true;
  const TrainResult frozen = train_model(m, train, valid, c);
  CHECK(frozen.best_model.embedding == m.embedding);
}

TEST_CASE("metrics csv") {
  MetricsLog log;
  log.epochs.push_back({1, 2.5, 10.0, 0.5, 0.25, 0.75, 0.001, 3.0});
  const auto path = std::filesystem::temp_directory_path() / "quixer-metrics-test.csv";
  write_metrics_csv(log, path);
  std::ifstream in(path);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "epoch,train_loss,valid_ppl,postsel_mean,postsel_min,postsel_max,lr");
  CHECK(row.rfind("1,", 0) == 0);
  CHECK(std::count(row.begin(), row.end(), ',') == 6);
}
