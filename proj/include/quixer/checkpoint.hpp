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
 * Model checkpoints.
 *
 * Layout (all integers little-endian):
 *
 *     bytes 0-7    magic "QUIXCKPT"
 *     bytes 8-11   uint32 format version (1)
 *     bytes 12-19  uint64 header length H
 *     next H bytes UTF-8 JSON header: format tag, model shape, vocabulary,
 *                  tensor table {name, shape, offset, count}, free-form meta
 *     remainder    float64 tensor data, little-endian, in table order
 */

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "quixer/model.hpp"

namespace quixer {

inline constexpr std::uint32_t kCheckpointVersion = 1;
inline constexpr std::string_view kCheckpointFormat = "quixer-checkpoint";

struct Checkpoint {
  QuixerModel model;
  std::vector<std::string> vocab;
  nlohmann::json meta = nlohmann::json::object();
};

nlohmann::json shape_to_json(const ModelShape& shape);
ModelShape shape_from_json(const nlohmann::json& doc);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
/// Throws DataError on a malformed or truncated file.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace quixer
