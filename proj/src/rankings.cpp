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

#include "rankfair/rankings.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <unordered_set>

#include "rankfair/errors.hpp"
#include "rankfair/io.hpp"

namespace rankfair {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t begin = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > begin) fields.push_back(line.substr(begin, i - begin));
  }
  return fields;
}

bool parse_double(std::string_view text, double& value) {
  if (text.empty()) return false;
  auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

bool parse_int(std::string_view text, long long& value) {
  if (text.empty()) return false;
  auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

RunMap parse_run_lines(LineReader& reader, std::vector<std::string>*) {
  struct Raw {
    std::string doc_id;
    double score;
  };
  std::map<std::string, std::vector<Raw>> raw;
  std::map<std::string, std::unordered_set<std::string>> seen;

  auto fail = [&](const std::string& what) -> ValidationError {
    return ValidationError(reader.source() + ":" +
                           std::to_string(reader.line_number()) + ": " + what);
  };

  std::string line;
  while (reader.next(line)) {
    if (line.empty()) continue;
    auto fields = split_ws(line);
    if (fields.size() != 6) {
      throw fail("expected 6 columns (qid Q0 docid rank score tag), got " +
                 std::to_string(fields.size()));
    }
    std::string qid(fields[0]);
    std::string doc_id(fields[2]);
    long long rank = 0;
    if (!parse_int(fields[3], rank)) {
      throw fail("non-numeric rank: " + std::string(fields[3]));
    }
    double score = 0.0;
    if (!parse_double(fields[4], score)) {
      throw fail("non-numeric score: " + std::string(fields[4]));
    }
    if (!seen[qid].insert(doc_id).second) {
      throw fail("duplicate document " + doc_id + " for query " + qid);
    }
    raw[qid].push_back({std::move(doc_id), score});
  }

  RunMap run;
  for (auto& [qid, entries] : raw) {
    std::sort(entries.begin(), entries.end(), [](const Raw& a, const Raw& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.doc_id < b.doc_id;  // deterministic tie break
    });
    RankedList list;
    list.query_id = qid;
    list.entries.reserve(entries.size());
    int rank = 1;
    for (auto& entry : entries) {
      list.entries.push_back({std::move(entry.doc_id), rank++, entry.score});
    }
    run.emplace(qid, std::move(list));
  }
  return run;
}

Qrels parse_qrels_lines(LineReader& reader,
                        std::vector<std::string>* warnings) {
  Qrels qrels;
  auto fail = [&](const std::string& what) -> ValidationError {
    return ValidationError(reader.source() + ":" +
                           std::to_string(reader.line_number()) + ": " + what);
  };

  std::string line;
  while (reader.next(line)) {
    if (line.empty()) continue;
    auto fields = split_ws(line);
    if (fields.size() != 4) {
      throw fail("expected 4 columns (qid 0 docid grade), got " +
                 std::to_string(fields.size()));
    }
    long long grade = 0;
    if (!parse_int(fields[3], grade) || grade < 0) {
      throw fail("bad relevance grade: " + std::string(fields[3]));
    }
    std::string qid(fields[0]);
    std::string doc_id(fields[2]);
    auto& for_query = qrels.grades[qid];
    auto [it, inserted] =
        for_query.emplace(std::move(doc_id), static_cast<int>(grade));
    if (!inserted) {
      if (warnings != nullptr) {
        warnings->push_back("qrels " + reader.source() + ":" +
                            std::to_string(reader.line_number()) +
                            ": repeated pair (" + qid + ", " + it->first +
                            "), keeping the last grade");
      }
      it->second = static_cast<int>(grade);
    }
  }
  return qrels;
}

}  // namespace

RunMap parse_run(const std::filesystem::path& path,
                 std::vector<std::string>* warnings) {
  LineReader reader(path);
  return parse_run_lines(reader, warnings);
}

RunMap parse_run(std::istream& stream, std::vector<std::string>* warnings) {
  LineReader reader(stream);
  return parse_run_lines(reader, warnings);
}

Qrels parse_qrels(const std::filesystem::path& path,
                  std::vector<std::string>* warnings) {
  LineReader reader(path);
  return parse_qrels_lines(reader, warnings);
}

Qrels parse_qrels(std::istream& stream, std::vector<std::string>* warnings) {
  LineReader reader(stream);
  return parse_qrels_lines(reader, warnings);
}

RankedList truncate(const RankedList& list, int k) {
  if (k < 1) throw ValidationError("truncate needs k >= 1");
  RankedList out;
  out.query_id = list.query_id;
  const std::size_t n =
      std::min(list.entries.size(), static_cast<std::size_t>(k));
  out.entries.assign(list.entries.begin(), list.entries.begin() + n);
  return out;
}

void write_run(const RunMap& run, std::ostream& out, const std::string& tag) {
  for (const auto& [qid, list] : run) {
    for (const auto& entry : list.entries) {
      out << qid << " Q0 " << entry.doc_id << ' ' << entry.rank << ' '
          << format_double(entry.score) << ' ' << tag << '\n';
    }
  }
}

}  // namespace rankfair
