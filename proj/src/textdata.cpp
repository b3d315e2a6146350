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

#include "quixer/textdata.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "quixer/errors.hpp"

namespace quixer {

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  for (std::string_view special : {kUnkToken, kEosToken}) {
    if (std::find(tokens_.begin(), tokens_.end(), special) == tokens_.end()) {
      tokens_.emplace_back(special);
    }
  }
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<TokenId>(i)).second) {
      throw DataError("duplicate vocabulary token '" + tokens_[i] + "'");
    }
  }
  unk_ = index_.at(std::string(kUnkToken));
  eos_ = index_.at(std::string(kEosToken));
}

TokenId Vocabulary::id(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? unk_ : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return index_.contains(std::string(token));
}

const std::string& Vocabulary::token(TokenId id) const {
  if (id >= tokens_.size()) throw DimensionError("token id " + std::to_string(id) + " out of range");
  return tokens_[id];
}

std::vector<std::string> split_whitespace(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  auto space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; };
  while (i < line.size()) {
    while (i < line.size() && space(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !space(line[i])) ++i;
    if (i > start) out.emplace_back(line.substr(start, i - start));
  }
  return out;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read corpus file '" + path.string() + "'");
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(std::move(line));
  return lines;
}

Vocabulary build_vocab(std::span<const std::string> lines) {
  std::vector<std::string> order;
  std::unordered_set<std::string> seen;
  for (const auto& line : lines)
    for (auto& tok : split_whitespace(line))
      if (seen.insert(tok).second) order.push_back(std::move(tok));
  if (order.empty()) throw DataError("cannot build a vocabulary from an empty corpus");
  return Vocabulary(std::move(order));
}

TokenStream encode(const Vocabulary& vocab, std::span<const std::string> lines, Split split,
                   bool append_eos) {
  TokenStream s;
  s.split = split;
  for (const auto& line : lines) {
    for (const auto& tok : split_whitespace(line)) s.ids.push_back(vocab.id(tok));
    if (append_eos) s.ids.push_back(vocab.eos_id());
  }
  return s;
}

std::vector<std::string> decode(const Vocabulary& vocab, std::span<const TokenId> ids) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (TokenId id : ids) out.push_back(vocab.token(id));
  return out;
}

void save_vocab(const Vocabulary& vocab, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write vocabulary to '" + path.string() + "'");
  for (const auto& tok : vocab.tokens()) out << tok << '\n';
}

Vocabulary load_vocab(const std::filesystem::path& path) {
  std::vector<std::string> tokens;
  for (auto& line : read_lines(path))
    if (!line.empty()) tokens.push_back(std::move(line));
  return Vocabulary(std::move(tokens));
}

WindowView::WindowView(const TokenStream& stream, std::size_t n, std::size_t stride)
    : ids_(stream.ids), n_(n), stride_(stride) {
  if (n == 0 || stride == 0) throw DimensionError("window and stride must be positive");
  if (ids_.size() <= n) {
    throw DataError("token stream of length " + std::to_string(ids_.size()) +
                    " is too short for windows of " + std::to_string(n));
  }
  count_ = (ids_.size() - n - 1) / stride + 1;
}

Window WindowView::operator[](std::size_t i) const {
  const std::size_t s = i * stride_;
  return {ids_.subspan(s, n_), ids_[s + n_], s};
}

Example WindowView::example(std::size_t i) const {
  const Window w = (*this)[i];
  return {std::vector<TokenId>(w.context.begin(), w.context.end()), w.target};
}

WindowView windows(const TokenStream& stream, std::size_t n, std::size_t stride) {
  return WindowView(stream, n, stride);
}

}  // namespace quixer
