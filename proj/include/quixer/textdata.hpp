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
 * Word-level corpora: vocabulary, encoding and sliding next-token windows.
 */

#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "quixer/grad.hpp"

namespace quixer {

inline constexpr std::string_view kUnkToken = "<unk>";
inline constexpr std::string_view kEosToken = "<eos>";

class Vocabulary {
 public:
  /// Tokens in id order; <unk> and <eos> are appended when absent.
  explicit Vocabulary(std::vector<std::string> tokens);

  [[nodiscard]] std::size_t size() const noexcept { return tokens_.size(); }
  [[nodiscard]] TokenId unk_id() const noexcept { return unk_; }
  [[nodiscard]] TokenId eos_id() const noexcept { return eos_; }
  /// Id of `token`, or unk_id() when it is out of vocabulary.
  [[nodiscard]] TokenId id(std::string_view token) const;
  [[nodiscard]] bool contains(std::string_view token) const;
  [[nodiscard]] const std::string& token(TokenId id) const;
  [[nodiscard]] const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.tokens_ == b.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
  TokenId unk_ = 0;
  TokenId eos_ = 0;
};

enum class Split { Train, Valid, Test };

struct TokenStream {
  std::vector<TokenId> ids;
  Split split = Split::Train;
};

std::vector<std::string> split_whitespace(std::string_view line);

/// Lines of a UTF-8 text file. Throws DataError naming the path on failure.
std::vector<std::string> read_lines(const std::filesystem::path& path);

/// First-occurrence order over whitespace tokens of `lines`, then <unk>, <eos>.
/// Throws DataError when the corpus has no tokens.
Vocabulary build_vocab(std::span<const std::string> lines);

/// Per line: tokens mapped (OOV -> unk), then eos when `append_eos`.
TokenStream encode(const Vocabulary& vocab, std::span<const std::string> lines,
                   Split split = Split::Train, bool append_eos = true);

std::vector<std::string> decode(const Vocabulary& vocab, std::span<const TokenId> ids);

/// One token per line, in id order.
void save_vocab(const Vocabulary& vocab, const std::filesystem::path& path);
Vocabulary load_vocab(const std::filesystem::path& path);

struct Window {
  std::span<const TokenId> context;
  TokenId target = 0;
  std::size_t start = 0;
};

/**
 * Windows starting at s = 0, stride, 2 stride, ... with s + n < length:
 * context ids[s, s+n), target ids[s+n]. There are (length - n - 1) / stride + 1.
 * The view refers to the stream, which must outlive it.
 */
class WindowView {
 public:
  WindowView(const TokenStream& stream, std::size_t n, std::size_t stride);

  [[nodiscard]] std::size_t size() const noexcept { return count_; }
  [[nodiscard]] std::size_t window() const noexcept { return n_; }
  [[nodiscard]] Window operator[](std::size_t i) const;
  [[nodiscard]] Example example(std::size_t i) const;

  class iterator {
   public:
    using value_type = Window;
    using difference_type = std::ptrdiff_t;
    iterator() = default;
    iterator(const WindowView* view, std::size_t i) : view_(view), i_(i) {}
    Window operator*() const { return (*view_)[i_]; }
    iterator& operator++() { ++i_; return *this; }
    iterator operator++(int) { auto t = *this; ++i_; return t; }
    friend bool operator==(const iterator& a, const iterator& b) { return a.i_ == b.i_; }
   private:
    const WindowView* view_ = nullptr;
    std::size_t i_ = 0;
  };
  [[nodiscard]] iterator begin() const { return {this, 0}; }
  [[nodiscard]] iterator end() const { return {this, count_}; }

 private:
  std::span<const TokenId> ids_;
  std::size_t n_;
  std::size_t stride_;
  std::size_t count_;
};

WindowView windows(const TokenStream& stream, std::size_t n, std::size_t stride);

}  // namespace quixer
