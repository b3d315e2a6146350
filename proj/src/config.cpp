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

#include "quixer/config.hpp"

#include <algorithm>
#include <fstream>

#include "quixer/errors.hpp"

namespace quixer {

namespace {

template <typename T>
void read(const nlohmann::json& doc, const char* key, T& out) {
  if (!doc.contains(key)) return;
  const auto& v = doc.at(key);
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw ConfigError(std::string("'") + key + "' must be a boolean");
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) throw ConfigError(std::string("'") + key + "' must be a string");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw ConfigError(std::string("'") + key + "' must be an integer");
    if (std::is_unsigned_v<T> && v.is_number_integer() && v.get<std::int64_t>() < 0) {
      throw ConfigError(std::string("'") + key + "' must be nonnegative");
    }
  } else {
    if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  }
  out = v.get<T>();
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "train_path", "valid_path",    "test_path",   "output_dir",   "append_eos",
      "seed",       "threads",       "num_qubits",  "window",       "degree",
      "ansatz_layers", "embed_dim",  "head_hidden", "epochs",       "batch_contexts",
      "targets_per_context", "stride", "lr_max",    "lr_min",       "weight_decay",
      "dropout",    "adam_beta1",    "adam_beta2",  "adam_eps",     "grad_clip",
      "freeze_embeddings"};
  return keys;
}

void RunConfig::validate() const {
  if (train_path.empty()) throw ConfigError("train_path is required");
  if (valid_path.empty()) throw ConfigError("valid_path is required");
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
  train.validate();
  ModelShape s = shape;
  s.vocab_size = std::max<std::size_t>(s.vocab_size, 1);
  try {
    s.validate();
  } catch (const DimensionError& e) {
    throw ConfigError(e.what());
  }
}

RunConfig config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  const auto& keys = config_keys();
  for (const auto& [key, value] : doc.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  RunConfig c;
  read(doc, "train_path", c.train_path);
  read(doc, "valid_path", c.valid_path);
  read(doc, "test_path", c.test_path);
  read(doc, "output_dir", c.output_dir);
  read(doc, "append_eos", c.append_eos);
  read(doc, "seed", c.train.seed);
  read(doc, "threads", c.train.threads);
  read(doc, "num_qubits", c.shape.num_qubits);
  read(doc, "window", c.shape.window);
  read(doc, "degree", c.shape.degree);
  read(doc, "ansatz_layers", c.shape.ansatz_layers);
  read(doc, "embed_dim", c.shape.embed_dim);
  read(doc, "head_hidden", c.shape.head_hidden);
  read(doc, "epochs", c.train.epochs);
  read(doc, "batch_contexts", c.train.batch_contexts);
  read(doc, "targets_per_context", c.train.targets_per_context);
  read(doc, "stride", c.train.stride);
  read(doc, "lr_max", c.train.lr_max);
  read(doc, "lr_min", c.train.lr_min);
  read(doc, "weight_decay", c.train.weight_decay);
  read(doc, "dropout", c.train.dropout);
  read(doc, "adam_beta1", c.train.adam_beta1);
  read(doc, "adam_beta2", c.train.adam_beta2);
  read(doc, "adam_eps", c.train.adam_eps);
  read(doc, "grad_clip", c.train.grad_clip);
  read(doc, "freeze_embeddings", c.train.freeze_embeddings);
  return c;
}

nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json doc = nlohmann::json::object();
  doc["train_path"] = c.train_path;
  doc["valid_path"] = c.valid_path;
  doc["test_path"] = c.test_path;
  doc["output_dir"] = c.output_dir;
  doc["append_eos"] = c.append_eos;
  doc["seed"] = c.train.seed;
  doc["threads"] = c.train.threads;
  doc["num_qubits"] = c.shape.num_qubits;
  doc["window"] = c.shape.window;
  doc["degree"] = c.shape.degree;
  doc["ansatz_layers"] = c.shape.ansatz_layers;
  doc["embed_dim"] = c.shape.embed_dim;
  doc["head_hidden"] = c.shape.head_hidden;
  doc["epochs"] = c.train.epochs;
  doc["batch_contexts"] = c.train.batch_contexts;
  doc["targets_per_context"] = c.train.targets_per_context;
  doc["stride"] = c.train.stride;
  doc["lr_max"] = c.train.lr_max;
  doc["lr_min"] = c.train.lr_min;
  doc["weight_decay"] = c.train.weight_decay;
  doc["dropout"] = c.train.dropout;
  doc["adam_beta1"] = c.train.adam_beta1;
  doc["adam_beta2"] = c.train.adam_beta2;
  doc["adam_eps"] = c.train.adam_eps;
  doc["grad_clip"] = c.train.grad_clip;
  doc["freeze_embeddings"] = c.train.freeze_embeddings;
  return doc;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return config_from_json(doc);
}

void apply_override(nlohmann::json& doc, std::string_view key, const std::string& text) {
  const auto& keys = config_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
  const nlohmann::json defaults = config_to_json(RunConfig{});
  if (defaults.at(std::string(key)).is_string()) {
    doc[std::string(key)] = text;
    return;
  }
  try {
    doc[std::string(key)] = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    throw ConfigError("bad value '" + text + "' for " + std::string(key));
  }
}

}  // namespace quixer
