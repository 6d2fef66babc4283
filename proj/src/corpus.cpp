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

#include "rankfair/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "rankfair/errors.hpp"
#include "rankfair/io.hpp"
#include "rankfair/parallel.hpp"
#include "rankfair/tokenizer.hpp"

namespace rankfair {

namespace {

constexpr std::size_t kBatchLines = 16384;

bool parse_u64(std::string_view text, std::uint64_t& value) {
  if (text.empty()) return false;
  auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  for (;;) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cols.push_back(line.substr(start));
      return cols;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

}  // namespace

CorpusIndex::CorpusIndex(std::vector<std::string> group_ids,
                         std::string tokenizer_id,
                         std::uint64_t lexicon_fingerprint,
                         std::vector<DocStats> docs)
    : group_ids_(std::move(group_ids)),
      tokenizer_id_(std::move(tokenizer_id)),
      lexicon_fingerprint_(lexicon_fingerprint),
      docs_(std::move(docs)) {
  std::sort(docs_.begin(), docs_.end(),
            [](const DocStats& a, const DocStats& b) {
              return a.doc_id < b.doc_id;
            });
  slots_.reserve(docs_.size());
  for (std::uint32_t i = 0; i < docs_.size(); ++i) {
    auto [it, inserted] = slots_.emplace(docs_[i].doc_id, i);
    if (!inserted) {
      throw ValidationError("duplicate doc_id: " + docs_[i].doc_id);
    }
  }
}

const DocStats* CorpusIndex::find(std::string_view doc_id) const {
  auto it = slots_.find(doc_id);
  return it == slots_.end() ? nullptr : &docs_[it->second];
}

bool CorpusIndex::operator==(const CorpusIndex& other) const {
  return group_ids_ == other.group_ids_ &&
         tokenizer_id_ == other.tokenizer_id_ &&
         lexicon_fingerprint_ == other.lexicon_fingerprint_ &&
         docs_ == other.docs_;
}

DocStats make_doc_stats(std::string doc_id, std::string_view text,
                        const GroupLexicon& lexicon) {
  DocStats stats;
  stats.doc_id = std::move(doc_id);
  stats.magnitudes.assign(lexicon.group_count(), 0);
  std::string lower;
  for_each_token(text, [&](std::string_view raw) {
    ++stats.length;
    lower.clear();
    for (char c : raw) lower.push_back(lower_ascii(c));
    std::uint32_t slot = lexicon.group_of_term(lower);
    if (slot != GroupLexicon::kNoGroup) ++stats.magnitudes[slot];
  });
  return stats;
}

namespace {

// Shared by the stream and in-memory builders: tokenize batches in parallel,
// then append in input order so duplicate detection is deterministic.
class IndexBuilder {
 public:
  IndexBuilder(const GroupLexicon& lexicon, int workers)
      : lexicon_(lexicon), workers_(workers) {}

  void add_batch(std::vector<std::pair<std::string, std::string>>& batch) {
    std::vector<DocStats> out(batch.size());
    parallel_for(batch.size(), workers_,
                 [&](std::size_t begin, std::size_t end) {
                   for (std::size_t i = begin; i < end; ++i) {
                     out[i] = make_doc_stats(std::move(batch[i].first),
                                             batch[i].second, lexicon_);
                   }
                 });
    for (auto& stats : out) docs_.push_back(std::move(stats));
    batch.clear();
  }

  CorpusIndex finish() {
    std::vector<std::string> group_ids;
    group_ids.reserve(lexicon_.group_count());
    for (const auto& group : lexicon_.groups()) group_ids.push_back(group.id);
    return CorpusIndex(std::move(group_ids), std::string(kTokenizerId),
                       lexicon_.fingerprint(), std::move(docs_));
  }

 private:
  const GroupLexicon& lexicon_;
  int workers_;
  std::vector<DocStats> docs_;
};

CorpusIndex build_from_reader(LineReader& reader, const GroupLexicon& lexicon,
                              int workers) {
  IndexBuilder builder(lexicon, workers);
  std::vector<std::pair<std::string, std::string>> batch;
  batch.reserve(kBatchLines);
  std::string line;
  while (reader.next(line)) {
    if (line.empty()) continue;  // tolerate trailing blank lines
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw ValidationError(reader.source() + ":" +
                            std::to_string(reader.line_number()) +
                            ": expected doc_id<TAB>text");
    }
    batch.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    if (batch.size() >= kBatchLines) builder.add_batch(batch);
  }
  builder.add_batch(batch);
  return builder.finish();
}

}  // namespace

CorpusIndex build_index(std::istream& collection, const GroupLexicon& lexicon,
                        int workers) {
  LineReader reader(collection);
  return build_from_reader(reader, lexicon, workers);
}

CorpusIndex build_index(const std::filesystem::path& collection,
                        const GroupLexicon& lexicon, int workers) {
  LineReader reader(collection);
  return build_from_reader(reader, lexicon, workers);
}

CorpusIndex build_index(
    const std::vector<std::pair<std::string, std::string>>& docs,
    const GroupLexicon& lexicon, int workers) {
  IndexBuilder builder(lexicon, workers);
  auto copy = docs;
  builder.add_batch(copy);
  return builder.finish();
}

namespace {

// Appends a line to the stream while folding it into the running checksum.
class ChecksumWriter {
 public:
  explicit ChecksumWriter(std::ostream& out) : out_(out) {}

  void line(std::string_view text) {
    state_ = fnv1a64(text, state_);
    state_ = fnv1a64("\n", state_);
    out_ << text << '\n';
  }

  std::uint64_t checksum() const { return state_; }

 private:
  std::ostream& out_;
  std::uint64_t state_ = kFnvOffsetBasis;
};

}  // namespace

void save_index(const CorpusIndex& index, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out.is_open()) throw IoError("cannot write " + path.string());

  ChecksumWriter writer(out);
  writer.line("rankfairidx\t" + std::to_string(CorpusIndex::kFormatVersion));
  writer.line("tokenizer\t" + index.tokenizer_id());
  writer.line("lexicon\t" + to_hex64(index.lexicon_fingerprint()));
  std::string groups = "groups";
  for (const auto& id : index.group_ids()) {
    groups += '\t';
    groups += id;
  }
  writer.line(groups);
  writer.line("docs\t" + std::to_string(index.size()));

  std::string record;
  for (const DocStats& doc : index.docs()) {
    record = doc.doc_id;
    record += '\t';
    record += std::to_string(doc.length);
    for (auto m : doc.magnitudes) {
      record += '\t';
      record += std::to_string(m);
    }
    writer.line(record);
  }
  out << "checksum\t" << to_hex64(writer.checksum()) << '\n';
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

CorpusIndex load_index(const std::filesystem::path& path) {
  LineReader reader(path);
  std::string line;

  auto fail = [&](const std::string& what) -> ValidationError {
    return ValidationError(path.string() + ":" +
                           std::to_string(reader.line_number()) + ": " + what);
  };
  auto next_required = [&](std::string& out) {
    if (!reader.next(out)) {
      throw ValidationError(path.string() + ": truncated index file");
    }
  };

  std::uint64_t checksum = kFnvOffsetBasis;
  auto fold = [&](const std::string& text) {
    checksum = fnv1a64(text, checksum);
    checksum = fnv1a64("\n", checksum);
  };

  next_required(line);
  {
    auto cols = split_tabs(line);
    if (cols.size() != 2 || cols[0] != "rankfairidx") {
      throw fail("not a rankfair index file");
    }
    std::uint64_t version = 0;
    if (!parse_u64(cols[1], version)) throw fail("bad version field");
    if (version != CorpusIndex::kFormatVersion) {
      throw fail("unsupported index format version " + std::string(cols[1]));
    }
  }
  fold(line);

  next_required(line);
  auto tok_cols = split_tabs(line);
  if (tok_cols.size() != 2 || tok_cols[0] != "tokenizer") {
    throw fail("missing tokenizer header");
  }
  std::string tokenizer_id(tok_cols[1]);
  fold(line);

  next_required(line);
  auto lex_cols = split_tabs(line);
  std::uint64_t fingerprint = 0;
  if (lex_cols.size() != 2 || lex_cols[0] != "lexicon" ||
      !parse_hex64(lex_cols[1], fingerprint)) {
    throw fail("missing or malformed lexicon fingerprint");
  }
  fold(line);

  next_required(line);
  auto group_cols = split_tabs(line);
  if (group_cols.size() < 3 || group_cols[0] != "groups") {
    throw fail("missing groups header (need at least two groups)");
  }
  std::vector<std::string> group_ids(group_cols.begin() + 1, group_cols.end());
  fold(line);

  next_required(line);
  auto count_cols = split_tabs(line);
  std::uint64_t doc_count = 0;
  if (count_cols.size() != 2 || count_cols[0] != "docs" ||
      !parse_u64(count_cols[1], doc_count)) {
    throw fail("missing docs header");
  }
  fold(line);

  std::vector<DocStats> docs;
  docs.reserve(doc_count);
  const std::size_t fields = 2 + group_ids.size();
  for (std::uint64_t i = 0; i < doc_count; ++i) {
    if (!reader.next(line)) {
      throw ValidationError(path.string() +
                            ": truncated index file (checksum unverifiable)");
    }
    auto cols = split_tabs(line);
    if (cols.size() != fields) throw fail("malformed document record");
    DocStats stats;
    stats.doc_id = std::string(cols[0]);
    if (stats.doc_id.empty()) throw fail("empty doc_id");
    if (!parse_u64(cols[1], stats.length)) throw fail("bad length field");
    stats.magnitudes.resize(group_ids.size());
    for (std::size_t g = 0; g < group_ids.size(); ++g) {
      if (!parse_u64(cols[2 + g], stats.magnitudes[g])) {
        throw fail("bad magnitude field");
      }
    }
    fold(line);
    docs.push_back(std::move(stats));
  }

  if (!reader.next(line)) {
    throw ValidationError(path.string() +
                          ": missing checksum trailer (file truncated?)");
  }
  auto trailer = split_tabs(line);
  std::uint64_t stored = 0;
  if (trailer.size() != 2 || trailer[0] != "checksum" ||
      !parse_hex64(trailer[1], stored)) {
    throw fail("malformed checksum trailer");
  }
  if (stored != checksum) {
    throw ValidationError(path.string() + ": checksum mismatch (expected " +
                          to_hex64(stored) + ", computed " +
                          to_hex64(checksum) + ")");
  }
  if (reader.next(line)) throw fail("trailing data after checksum");

  return CorpusIndex(std::move(group_ids), std::move(tokenizer_id),
                     fingerprint, std::move(docs));
}

void verify_index_lexicon(const CorpusIndex& index,
                          const GroupLexicon& lexicon) {
  if (index.lexicon_fingerprint() != lexicon.fingerprint()) {
    throw ValidationError(
        "index was built with a different lexicon (fingerprint " +
        to_hex64(index.lexicon_fingerprint()) + " vs " +
        to_hex64(lexicon.fingerprint()) + "); rebuild the index");
  }
  if (index.tokenizer_id() != kTokenizerId) {
    throw ValidationError("index tokenizer '" + index.tokenizer_id() +
                          "' does not match this build ('" +
                          std::string(kTokenizerId) + "')");
  }
}

}  // namespace rankfair
