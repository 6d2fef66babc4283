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

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace rankfair {

struct RunEntry {
  std::string doc_id;
  int rank = 0;  // 1-based, recomputed by the parser
  double score = 0.0;

  bool operator==(const RunEntry&) const = default;
};

/// One query's ranking, ordered by (score desc, doc_id asc) with ranks
/// 1..n. doc_ids are unique within the list.
struct RankedList {
  std::string query_id;
  std::vector<RunEntry> entries;

  bool operator==(const RankedList&) const = default;
};

using RunMap = std::map<std::string, RankedList>;

/// (query_id, doc_id) -> relevance grade.
struct Qrels {
  std::map<std::string, std::map<std::string, int>> grades;

  const std::map<std::string, int>* for_query(const std::string& qid) const {
    auto it = grades.find(qid);
    return it == grades.end() ? nullptr : &it->second;
  }
};

/// Parses a TREC run file (`qid Q0 docid rank score tag`, whitespace
/// separated, .gz accepted). The rank column must be numeric but is ignored:
/// lists are re-sorted by (score desc, doc_id asc) and re-ranked from 1, so
/// runs with sloppy rank columns still evaluate deterministically.
RunMap parse_run(const std::filesystem::path& path,
                 std::vector<std::string>* warnings = nullptr);
RunMap parse_run(std::istream& stream,
                 std::vector<std::string>* warnings = nullptr);

/// Parses TREC qrels (`qid 0 docid grade`, .gz accepted). A repeated
/// (qid, docid) pair keeps the last grade and emits a warning.
Qrels parse_qrels(const std::filesystem::path& path,
                  std::vector<std::string>* warnings = nullptr);
Qrels parse_qrels(std::istream& stream,
                  std::vector<std::string>* warnings = nullptr);

/// First min(k, n) entries, k >= 1.
RankedList truncate(const RankedList& list, int k);

/// Serializes in the same 6-column format parse_run reads.
void write_run(const RunMap& run, std::ostream& out,
               const std::string& tag = "rankfair");

}  // namespace rankfair
