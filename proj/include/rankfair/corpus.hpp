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

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rankfair/hash.hpp"
#include "rankfair/lexicon.hpp"

namespace rankfair {

/// Everything the metrics need about one document: token count and the total
/// frequency of each group's representative terms. Magnitudes are parallel to
/// the owning index's group_ids().
struct DocStats {
  std::string doc_id;
  std::uint64_t length = 0;
  std::vector<std::uint64_t> magnitudes;

  std::uint64_t total_magnitude() const {
    std::uint64_t sum = 0;
    for (auto m : magnitudes) sum += m;
    return sum;
  }

  bool operator==(const DocStats&) const = default;
};

/// Per-document statistics for a whole collection. Built once, immutable
/// afterwards, concurrently readable. Documents are kept sorted by doc_id so
/// that permuting the input collection yields an identical index.
class CorpusIndex {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;

  CorpusIndex(std::vector<std::string> group_ids, std::string tokenizer_id,
              std::uint64_t lexicon_fingerprint, std::vector<DocStats> docs);

  const std::vector<std::string>& group_ids() const { return group_ids_; }
  const std::string& tokenizer_id() const { return tokenizer_id_; }
  std::uint64_t lexicon_fingerprint() const { return lexicon_fingerprint_; }

  std::size_t size() const { return docs_.size(); }
  bool empty() const { return docs_.empty(); }
  const std::vector<DocStats>& docs() const { return docs_; }

  /// nullptr when the document is not in the index.
  const DocStats* find(std::string_view doc_id) const;

  bool operator==(const CorpusIndex& other) const;

 private:
  std::vector<std::string> group_ids_;
  std::string tokenizer_id_;
  std::uint64_t lexicon_fingerprint_ = 0;
  std::vector<DocStats> docs_;  // sorted by doc_id
  std::unordered_map<std::string, std::uint32_t, StringHash, std::equal_to<>>
      slots_;
};

DocStats make_doc_stats(std::string doc_id, std::string_view text,
                        const GroupLexicon& lexicon);

/// Builds the index from a collection TSV stream (`doc_id<TAB>text`, UTF-8).
/// Documents are tokenized in parallel; duplicate doc_ids and malformed lines
/// are rejected with their line number.
CorpusIndex build_index(std::istream& collection, const GroupLexicon& lexicon,
                        int workers = 0);
CorpusIndex build_index(const std::filesystem::path& collection,
                        const GroupLexicon& lexicon, int workers = 0);
CorpusIndex build_index(
    const std::vector<std::pair<std::string, std::string>>& docs,
    const GroupLexicon& lexicon, int workers = 0);

/// Index file layout (version 1, plain UTF-8 text, LF line ends):
///
///   rankfairidx<TAB>1
///   tokenizer<TAB><tokenizer id>
///   lexicon<TAB><16 hex digits>
///   groups<TAB><id>...                 one column per group
///   docs<TAB><count>
///   <doc_id>(TAB<length>(TAB<magnitude>)...)   one line per document,
///                                              sorted by doc_id
///   checksum<TAB><16 hex digits>       FNV-1a of every preceding line + \n
///
/// load_index verifies version, field counts, doc count, and the checksum;
/// the lexicon fingerprint is checked later, against the lexicon actually
/// supplied at metric time (verify_index_lexicon).
void save_index(const CorpusIndex& index, const std::filesystem::path& path);
CorpusIndex load_index(const std::filesystem::path& path);

/// Rejects index/lexicon pairs whose fingerprints disagree. Call before any
/// metric computation that uses both.
void verify_index_lexicon(const CorpusIndex& index,
                          const GroupLexicon& lexicon);

}  // namespace rankfair
