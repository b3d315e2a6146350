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
 * Run configuration: one flat JSON object. Every key can be overridden on the
 * command line as --key-with-dashes. Unknown keys are rejected.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "quixer/model.hpp"
#include "quixer/train.hpp"

namespace quixer {

struct RunConfig {
  std::string train_path;
  std::string valid_path;
  std::string test_path;
  std::string output_dir = "run";
  bool append_eos = true;

  ModelShape shape;  // vocab_size is filled in from the corpus
  TrainConfig train;

  [[nodiscard]] std::uint64_t seed() const noexcept { return train.seed; }
  /// Throws ConfigError.
  void validate() const;
};

/// Keys accepted in a config document, in echo order.
const std::vector<std::string>& config_keys();

/// Missing keys keep their defaults. Throws ConfigError on unknown keys or
/// values of the wrong type.
RunConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const RunConfig& config);
RunConfig load_config(const std::filesystem::path& path);

/// Sets one key from its command-line text ("0.01", "true", "data/x.txt").
void apply_override(nlohmann::json& doc, std::string_view key, const std::string& text);

}  // namespace quixer
