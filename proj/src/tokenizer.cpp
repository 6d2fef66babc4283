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

#include "rankfair/tokenizer.hpp"

namespace rankfair {

std::string to_lower_ascii(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) out.push_back(lower_ascii(c));
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  for_each_token(text, [&](std::string_view raw) {
    tokens.push_back(to_lower_ascii(raw));
  });
  return tokens;
}

}  // namespace rankfair
