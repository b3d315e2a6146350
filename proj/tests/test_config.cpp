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

#include "quixer/config.hpp"
#include "quixer/errors.hpp"

using namespace quixer;

namespace {

nlohmann::json minimal() {
  return {{"train_path", "t.txt"}, {"valid_path", "v.txt"}};
}

}  // namespace

TEST_CASE("defaults and round trip") {
  const RunConfig c = config_from_json(minimal());
  CHECK(c.shape.num_qubits == 6);
  CHECK(c.shape.window == 32);
  CHECK(c.train.epochs == 30);
  CHECK_NOTHROW(c.validate());
  const nlohmann::json j = config_to_json(c);
  CHECK(j.size() == config_keys().size());
  CHECK(config_to_json(config_from_json(j)) == j);
}

TEST_CASE("unknown keys and bad types") {
  auto j = minimal();
  j["num_qbits"] = 3;
  CHECK_THROWS_AS(config_from_json(j), ConfigError);
  j = minimal();
  j["window"] = "eight";
  CHECK_THROWS_AS(config_from_json(j), ConfigError);
  j = minimal();
  j["window"] = -1;
  CHECK_THROWS_AS(config_from_json(j), ConfigError);
  j = minimal();
  j["append_eos"] = 1;
  CHECK_THROWS_AS(config_from_json(j), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::array()), ConfigError);
}

TEST_CASE("validation") {
  RunConfig c = config_from_json(minimal());
  c.shape.num_qubits = 1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = config_from_json(minimal());
  c.train.lr_max = 1e-9;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = config_from_json(nlohmann::json{{"valid_path", "v"}});
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("overrides") {
  auto j = minimal();
  apply_override(j, "window", "8");
  apply_override(j, "lr_max", "0.02");
  apply_override(j, "output_dir", "runs/x");
  apply_override(j, "freeze_embeddings", "true");
  const RunConfig c = config_from_json(j);
  CHECK(c.shape.window == 8);
  CHECK(c.train.lr_max == doctest::Approx(0.02));
  CHECK(c.output_dir == "runs/x");
  CHECK(c.train.freeze_embeddings);
  CHECK_THROWS_AS(apply_override(j, "nope", "1"), ConfigError);
  CHECK_THROWS_AS(apply_override(j, "window", "{"), ConfigError);
}

TEST_CASE("bundled configs load") {
  for (const char* name : {"tiny.json", "ptb.json"}) {
    const RunConfig c = load_config(std::string(QUIXER_SOURCE_DIR "/configs/") + name);
    CHECK_NOTHROW(c.validate());
  }
  const RunConfig tiny = load_config(QUIXER_SOURCE_DIR "/configs/tiny.json");
  CHECK(tiny.shape.num_qubits == 4);
  CHECK(tiny.shape.window == 8);
  CHECK(tiny.shape.degree == 3);
  CHECK(tiny.shape.ansatz_layers == 2);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}
