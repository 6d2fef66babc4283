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

#include "rankfair/io.hpp"

#include <zlib.h>

#include <cstdio>
#include <fstream>

#include "rankfair/errors.hpp"
#include "rankfair/hash.hpp"

namespace rankfair {

struct LineReader::GzState {
  gzFile file = nullptr;
  bool eof = false;

  ~GzState() {
    if (file != nullptr) gzclose(file);
  }
};

namespace {

bool has_gz_extension(const std::filesystem::path& path) {
  return path.extension() == ".gz";
}

void strip_line_end(std::string& line) {
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) {
    line.pop_back();
  }
}

}  // namespace

LineReader::LineReader(const std::filesystem::path& path)
    : source_(path.string()) {
  if (has_gz_extension(path)) {
    gz_ = std::make_unique<GzState>();
    gz_->file = gzopen(path.string().c_str(), "rb");
    if (gz_->file == nullptr) {
      throw IoError("cannot open " + source_);
    }
    return;
  }
  auto stream = std::make_unique<std::ifstream>(path, std::ios::binary);
  if (!stream->is_open()) {
    throw IoError("cannot open " + source_);
  }
  stream_ = stream.get();
  owned_stream_ = std::move(stream);
}

LineReader::LineReader(std::istream& stream) : stream_(&stream) {}

LineReader::~LineReader() = default;

bool LineReader::next(std::string& line) {
  line.clear();
  if (gz_) {
    if (gz_->eof) return false;
    char buf[1 << 14];
    bool got_any = false;
    for (;;) {
      if (gzgets(gz_->file, buf, sizeof(buf)) == nullptr) {
        int err = Z_OK;
        const char* msg = gzerror(gz_->file, &err);
        if (err != Z_OK && err != Z_STREAM_END) {
          throw IoError("gzip read error in " + source_ + ": " +
                        (msg != nullptr ? msg : "unknown"));
        }
        gz_->eof = true;
        if (!got_any) return false;
        break;
      }
      got_any = true;
      line += buf;
      if (!line.empty() && line.back() == '\n') break;
    }
    strip_line_end(line);
    ++line_number_;
    return true;
  }
  if (!std::getline(*stream_, line)) return false;
  strip_line_end(line);
  ++line_number_;
  return true;
}

std::string format_double(double value, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
  return buf;
}

std::string to_hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

bool parse_hex64(std::string_view text, std::uint64_t& value) {
  if (text.empty() || text.size() > 16) return false;
  std::uint64_t acc = 0;
  for (char c : text) {
    acc <<= 4;
    if (c >= '0' && c <= '9') {
      acc |= static_cast<std::uint64_t>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      acc |= static_cast<std::uint64_t>(c - 'a' + 10);
    } else {
      return false;
    }
  }
  value = acc;
  return true;
}

}  // namespace rankfair
