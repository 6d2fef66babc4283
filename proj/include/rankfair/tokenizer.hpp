// Copyright 2026 The rankfair Authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rankfair {

/// The one tokenization rule used everywhere: ASCII letters and digits plus
/// any byte >= 0x80 are word bytes (multi-byte UTF-8 sequences stay inside a
/// token); every other byte splits. ASCII uppercase folds to lowercase.
/// The id is recorded in every index so indexes built under different rules
/// are never mixed.
inline constexpr std::string_view kTokenizerId = "lower-alnum-v1";

constexpr bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c >= 0x80;
}

constexpr char lower_ascii(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string to_lower_ascii(std::string_view text);

/// Lowercased tokens of `text`, in order. Empty input gives an empty vector.
std::vector<std::string> tokenize(std::string_view text);

/// Zero-copy walk over the raw (not yet lowercased) token spans of `text`.
template <typename Fn>
void for_each_token(std::string_view text, Fn&& fn) {
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && !is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t begin = i;
    while (i < n && is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
    if (i > begin) fn(text.substr(begin, i - begin));
  }
}

}  // namespace rankfair
