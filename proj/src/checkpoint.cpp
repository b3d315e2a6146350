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

#include "quixer/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "quixer/errors.hpp"
#include "quixer/grad.hpp"

namespace quixer {

namespace {

constexpr std::array<char, 8> kMagic{'Q', 'U', 'I', 'X', 'C', 'K', 'P', 'T'};

template <typename U>
void put_le(std::ostream& out, U value) {
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    out.put(static_cast<char>((value >> (8 * i)) & 0xff));
  }
}

template <typename U>
U get_le(std::istream& in) {
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) throw DataError("checkpoint truncated");
    value |= static_cast<U>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return value;
}

/// Tensor shapes in parameter_layout order.
std::vector<std::vector<std::size_t>> tensor_shapes(const ModelShape& s) {
  const std::size_t hidden = s.hidden_dim();
  return {{s.vocab_size, s.embed_dim},
          {s.angles_per_token(), s.embed_dim},
          {s.window},
          {s.window},
          {static_cast<std::size_t>(s.degree) + 1},
          {s.angles_per_token()},
          {hidden, s.readout_dim()},
          {hidden},
          {s.vocab_size, hidden},
          {s.vocab_size}};
}

}  // namespace

nlohmann::json shape_to_json(const ModelShape& shape) {
  return {{"vocab_size", shape.vocab_size}, {"embed_dim", shape.embed_dim},
          {"num_qubits", shape.num_qubits}, {"window", shape.window},
          {"degree", shape.degree},         {"ansatz_layers", shape.ansatz_layers},
          {"head_hidden", shape.hidden_dim()}};
}

ModelShape shape_from_json(const nlohmann::json& doc) {
  ModelShape s;
  s.vocab_size = doc.at("vocab_size").get<std::size_t>();
  s.embed_dim = doc.at("embed_dim").get<std::size_t>();
  s.num_qubits = doc.at("num_qubits").get<int>();
  s.window = doc.at("window").get<std::size_t>();
  s.degree = doc.at("degree").get<int>();
  s.ansatz_layers = doc.at("ansatz_layers").get<int>();
  s.head_hidden = doc.at("head_hidden").get<std::size_t>();
  s.validate();
  return s;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  const ParameterBundle params = flatten(ckpt.model);
  const auto shapes = tensor_shapes(ckpt.model.shape);
  nlohmann::json tensors = nlohmann::json::array();
  for (std::size_t i = 0; i < params.segments.size(); ++i) {
    const Segment& s = params.segments[i];
    tensors.push_back({{"name", s.name}, {"shape", shapes[i]}, {"offset", s.offset}, {"count", s.length}});
  }
  const nlohmann::json header{{"format", kCheckpointFormat},
                              {"version", kCheckpointVersion},
                              {"dtype", "float64-le"},
                              {"shape", shape_to_json(ckpt.model.shape)},
                              {"vocab", ckpt.vocab},
                              {"tensors", std::move(tensors)},
                              {"meta", ckpt.meta}};
  const std::string text = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint '" + path.string() + "'");
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kCheckpointVersion);
  put_le<std::uint64_t>(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (double v : params.values) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  if (!out) throw DataError("failed writing checkpoint '" + path.string() + "'");
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read checkpoint '" + path.string() + "'");
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw DataError("'" + path.string() + "' is not a checkpoint");
  const auto version = get_le<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw DataError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto header_len = get_le<std::uint64_t>(in);
  if (header_len > (std::uint64_t{1} << 32)) throw DataError("checkpoint header too large");
  std::string text(header_len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(header_len));
  if (!in) throw DataError("checkpoint truncated");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("corrupt checkpoint header: ") + e.what());
  }
  if (header.value("format", "") != kCheckpointFormat) throw DataError("wrong checkpoint format tag");

  Checkpoint ckpt;
  try {
    ckpt.model = make_model(shape_from_json(header.at("shape")));
    ckpt.vocab = header.at("vocab").get<std::vector<std::string>>();
    ckpt.meta = header.value("meta", nlohmann::json::object());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("corrupt checkpoint header: ") + e.what());
  }
  ParameterBundle params = flatten(ckpt.model);
  const auto& table = header.at("tensors");
  if (table.size() != params.segments.size()) throw DataError("checkpoint tensor table mismatch");
  for (std::size_t i = 0; i < table.size(); ++i) {
    const Segment& s = params.segments[i];
    if (table[i].at("name").get<std::string>() != s.name ||
        table[i].at("offset").get<std::size_t>() != s.offset ||
        table[i].at("count").get<std::size_t>() != s.length) {
      throw DataError("checkpoint tensor '" + s.name + "' does not match the model shape");
    }
  }
  for (double& v : params.values) v = std::bit_cast<double>(get_le<std::uint64_t>(in));
  if (in.peek() != std::char_traits<char>::eof()) throw DataError("trailing bytes in checkpoint");
  unflatten(params, ckpt.model);
  if (ckpt.vocab.size() != ckpt.model.shape.vocab_size) {
    throw DataError("checkpoint vocabulary size disagrees with the model");
  }
  return ckpt;
}

}  // namespace quixer
