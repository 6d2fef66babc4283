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

#include <cstdio>
#include <filesystem>
#include <istream>
#include <memory>
#include <string>

namespace rankfair {

/// Line-oriented reader over a plain or gzip-compressed file (picked by the
/// `.gz` extension), or over a caller-owned istream. Trailing \r and \n are
/// stripped; line_number() is 1-based for error messages.
class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path);
  explicit LineReader(std::istream& stream);
  ~LineReader();

  LineReader(const LineReader&) = delete;
  LineReader& operator=(const LineReader&) = delete;

  bool next(std::string& line);
  std::size_t line_number() const { return line_number_; }
  const std::string& source() const { return source_; }

 private:
  struct GzState;
  std::istream* stream_ = nullptr;
  std::unique_ptr<std::istream> owned_stream_;
  std::unique_ptr<GzState> gz_;
  std::string source_ = "<stream>";
  std::size_t line_number_ = 0;
};

/// printf-style %.17g double formatting; round-trips exactly and is stable
/// across runs, which the byte-identical-report contract relies on.
std::string format_double(double value, int precision = 17);

}  // namespace rankfair
