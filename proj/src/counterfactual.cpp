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

#include "rankfair/counterfactual.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "rankfair/errors.hpp"
#include "rankfair/io.hpp"
#include "rankfair/parallel.hpp"
#include "rankfair/tokenizer.hpp"

namespace rankfair {

namespace {

// Tokens that read as verbs or connectives right after a pronoun; "told her
// to go" stays a pronoun while "her book" becomes a possessive.
const std::unordered_set<std::string>& verb_like_stopwords() {
  static const std::unordered_set<std::string> words = {
      "is",    "was",    "are",   "were", "be",    "been",  "being", "am",
      "has",   "had",    "have",  "having", "will", "would", "can",  "could",
      "shall", "should", "may",   "might", "must", "do",    "does",  "did",
      "to",    "and",    "or",    "but",  "nor",   "not",   "so",    "then",
      "than",  "too",    "there", "here", "again", "now",   "that",  "because",
      "if",    "when",   "while", "as",   "at",    "by",    "for",   "from",
      "in",    "into",   "of",    "off",  "on",    "out",   "over",  "under",
      "up",    "down",   "with",  "without"};
  return words;
}

struct TokenSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

std::vector<TokenSpan> token_spans(std::string_view text) {
  std::vector<TokenSpan> spans;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && !is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t begin = i;
    while (i < n && is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
    if (i > begin) spans.push_back({begin, i});
  }
  return spans;
}

bool is_ascii_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_ascii_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
         c == '\v';
}

enum class CasePattern { kLower, kInitialCap, kAllCaps };

CasePattern case_pattern(std::string_view raw) {
  bool any_alpha = false;
  bool all_upper = true;
  for (char c : raw) {
    if (is_ascii_upper(c) || is_ascii_lower(c)) {
      any_alpha = true;
      if (!is_ascii_upper(c)) all_upper = false;
    }
  }
  if (!any_alpha) return CasePattern::kLower;
  if (all_upper && raw.size() > 1) return CasePattern::kAllCaps;
  if (is_ascii_upper(raw.front())) {
    for (std::size_t i = 1; i < raw.size(); ++i) {
      if (is_ascii_upper(raw[i])) return CasePattern::kLower;  // mixed case
    }
    return CasePattern::kInitialCap;
  }
  return CasePattern::kLower;
}

std::string apply_case(const std::string& replacement, CasePattern pattern) {
  std::string out = replacement;
  switch (pattern) {
    case CasePattern::kLower:
      break;
    case CasePattern::kInitialCap:
      if (!out.empty() && is_ascii_lower(out[0])) {
        out[0] = static_cast<char>(out[0] - 'a' + 'A');
      }
      break;
    case CasePattern::kAllCaps:
      for (char& c : out) {
        if (is_ascii_lower(c)) c = static_cast<char>(c - 'a' + 'A');
      }
      break;
  }
  return out;
}

// Heuristic usage resolution for pos-sensitive tokens when no annotation is
// available. Possessive needs a clause-mate successor token that is not
// verb-like and is itself followed by more text; everything else (clause end,
// end of text) reads as a plain pronoun. An approximation by design;
// annotation files override it.
PosTag resolve_usage(std::string_view text,
                     const std::vector<TokenSpan>& spans, std::size_t i) {
  if (i + 1 >= spans.size()) return PosTag::kPronoun;
  const TokenSpan& current = spans[i];
  const TokenSpan& next = spans[i + 1];
  for (std::size_t pos = current.end; pos < next.begin; ++pos) {
    if (!is_ascii_space(text[pos])) return PosTag::kPronoun;  // punctuation
  }
  std::string next_lower = to_lower_ascii(
      text.substr(next.begin, next.end - next.begin));
  if (verb_like_stopwords().count(next_lower) != 0) return PosTag::kPronoun;
  for (std::size_t pos = next.end; pos < text.size(); ++pos) {
    if (!is_ascii_space(text[pos])) return PosTag::kPossessive;
  }
  return PosTag::kPronoun;
}

}  // namespace

PosAnnotations load_pos_annotations(const std::filesystem::path& path) {
  LineReader reader(path);
  PosAnnotations annotations;
  std::string line;
  auto fail = [&](const std::string& what) -> ValidationError {
    return ValidationError(path.string() + ":" +
                           std::to_string(reader.line_number()) + ": " + what);
  };
  while (reader.next(line)) {
    if (line.empty() || line[0] == '#') continue;
    std::size_t tab1 = line.find('\t');
    std::size_t tab2 =
        tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
    if (tab1 == std::string::npos || tab2 == std::string::npos) {
      throw fail("expected doc_id<TAB>token_index<TAB>tag");
    }
    std::string doc_id = line.substr(0, tab1);
    std::string_view index_text =
        std::string_view(line).substr(tab1 + 1, tab2 - tab1 - 1);
    std::string tag = line.substr(tab2 + 1);
    std::size_t token_index = 0;
    auto [ptr, ec] = std::from_chars(
        index_text.data(), index_text.data() + index_text.size(), token_index);
    if (ec != std::errc() || ptr != index_text.data() + index_text.size()) {
      throw fail("bad token index");
    }
    PosTag parsed;
    if (tag == "POSS") {
      parsed = PosTag::kPossessive;
    } else if (tag == "PRON") {
      parsed = PosTag::kPronoun;
    } else {
      throw fail("unknown tag '" + tag + "' (expected POSS or PRON)");
    }
    annotations[doc_id][token_index] = parsed;
  }
  return annotations;
}

std::string cds_transform(std::string_view text, const CdsMapping& mapping,
                          const TokenTags* tags,
                          std::map<std::string, std::uint64_t>* report) {
  const auto spans = token_spans(text);
  std::string out;
  out.reserve(text.size());
  std::size_t cursor = 0;
  std::string lower;

  for (std::size_t i = 0; i < spans.size(); ++i) {
    const TokenSpan& span = spans[i];
    out.append(text.substr(cursor, span.begin - cursor));
    cursor = span.end;
    std::string_view raw = text.substr(span.begin, span.end - span.begin);

    lower.clear();
    for (char c : raw) lower.push_back(lower_ascii(c));

    const std::string* replacement = nullptr;
    if (auto pos = mapping.pos_sensitive.find(lower);
        pos != mapping.pos_sensitive.end()) {
      PosTag usage;
      if (tags != nullptr) {
        auto tag_it = tags->find(i);
        usage = tag_it != tags->end() ? tag_it->second
                                      : resolve_usage(text, spans, i);
      } else {
        usage = resolve_usage(text, spans, i);
      }
      replacement = usage == PosTag::kPossessive ? &pos->second.possessive
                                                 : &pos->second.pronoun;
    } else {
      replacement = mapping.plain_lookup(lower);
    }

    if (replacement == nullptr) {
      out.append(raw);
      continue;
    }
    out.append(apply_case(*replacement, case_pattern(raw)));
    if (report != nullptr) ++(*report)[lower + "->" + *replacement];
  }
  out.append(text.substr(cursor));
  return out;
}

TransformReport cds_collection(const std::filesystem::path& collection,
                               const CdsMapping& mapping,
                               const std::filesystem::path& out,
                               const PosAnnotations* pos, int workers) {
  LineReader reader(collection);
  std::ofstream sink(out, std::ios::binary);
  if (!sink.is_open()) throw IoError("cannot write " + out.string());

  TransformReport report;
  constexpr std::size_t kBatch = 8192;

  struct Item {
    std::string doc_id;
    std::string text;
    std::string transformed;
    std::map<std::string, std::uint64_t> counts;
  };

  std::vector<Item> batch;
  batch.reserve(kBatch);
  std::string line;

  auto flush = [&]() {
    parallel_for(batch.size(), workers,
                 [&](std::size_t begin, std::size_t end) {
                   for (std::size_t i = begin; i < end; ++i) {
                     const TokenTags* tags = nullptr;
                     if (pos != nullptr) {
                       auto it = pos->find(batch[i].doc_id);
                       if (it != pos->end()) tags = &it->second;
                     }
                     batch[i].transformed = cds_transform(
                         batch[i].text, mapping, tags, &batch[i].counts);
                   }
                 });
    for (Item& item : batch) {
      ++report.documents;
      if (item.transformed != item.text) ++report.documents_changed;
      for (const auto& [key, count] : item.counts) {
        report.substitutions[key] += count;
      }
      sink << item.doc_id << '\t' << item.transformed << '\n';
    }
    batch.clear();
  };

  while (reader.next(line)) {
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw ValidationError(collection.string() + ":" +
                            std::to_string(reader.line_number()) +
                            ": expected doc_id<TAB>text");
    }
    Item item;
    item.doc_id = line.substr(0, tab);
    item.text = line.substr(tab + 1);
    batch.push_back(std::move(item));
    if (batch.size() >= kBatch) flush();
  }
  flush();
  sink.flush();
  if (!sink) throw IoError("failed writing " + out.string());
  return report;
}

void write_transform_report(const TransformReport& report,
                            const std::filesystem::path& path) {
  nlohmann::json doc;
  doc["documents"] = report.documents;
  doc["documents_changed"] = report.documents_changed;
  nlohmann::json subs = nlohmann::json::object();
  for (const auto& [key, count] : report.substitutions) subs[key] = count;
  doc["substitutions"] = std::move(subs);
  std::ofstream out(path);
  if (!out.is_open()) throw IoError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

void RboConfig::validate() const {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw ValidationError("RBO persistence must lie in (0,1)");
  }
  if (depth < 1) throw ValidationError("RBO depth must be >= 1");
}

double rbo(std::span<const std::string> a, std::span<const std::string> b,
           const RboConfig& cfg) {
  cfg.validate();
  auto check_unique = [](std::span<const std::string> list, char name) {
    std::unordered_set<std::string_view> seen;
    for (const auto& id : list) {
      if (!seen.insert(id).second) {
        throw ValidationError(std::string("duplicate id in list ") + name +
                              ": " + id);
      }
    }
  };
  check_unique(a, 'a');
  check_unique(b, 'b');

  const std::size_t depth = static_cast<std::size_t>(cfg.depth);
  const std::size_t horizon = std::min(depth, std::max(a.size(), b.size()));
  if (horizon == 0) return 0.0;

  // Incremental overlap: feed each list's next element into a shared seen-set;
  // an erase hit means the other list already produced it.
  std::unordered_set<std::string_view> pending;
  std::size_t overlap = 0;
  double weight = 1.0;  // p^(d-1)
  double truncated_sum = 0.0;
  for (std::size_t d = 1; d <= horizon; ++d) {
    if (d <= a.size() && d <= b.size() && a[d - 1] == b[d - 1]) {
      ++overlap;
    } else {
      if (d <= a.size()) {
        if (pending.erase(a[d - 1]) == 1) {
          ++overlap;
        } else {
          pending.insert(a[d - 1]);
        }
      }
      if (d <= b.size()) {
        if (pending.erase(b[d - 1]) == 1) {
          ++overlap;
        } else {
          pending.insert(b[d - 1]);
        }
      }
    }
    truncated_sum += weight * static_cast<double>(overlap) /
                     static_cast<double>(d);
    weight *= cfg.p;
  }
  const double truncated = (1.0 - cfg.p) * truncated_sum;
  if (cfg.variant == RboConfig::Variant::kTruncated) return truncated;
  // weight is now p^horizon.
  return truncated + weight * static_cast<double>(overlap) /
                         static_cast<double>(horizon);
}

CrboResult crbo(const RunMap& original, const RunMap& counterfactual,
                const RboConfig& cfg) {
  cfg.validate();
  CrboResult result;
  double sum = 0.0;
  for (const auto& [qid, list] : original) {
    auto it = counterfactual.find(qid);
    if (it == counterfactual.end()) {
      result.warnings.push_back("query " + qid +
                                " missing from counterfactual run; skipped");
      continue;
    }
    auto ids = [](const RankedList& l) {
      std::vector<std::string> out;
      out.reserve(l.entries.size());
      for (const auto& entry : l.entries) out.push_back(entry.doc_id);
      return out;
    };
    const auto a = ids(list);
    const auto b = ids(it->second);
    const double value = rbo(a, b, cfg);
    result.per_query.emplace_back(qid, value);
    sum += value;
  }
  for (const auto& [qid, list] : counterfactual) {
    if (original.find(qid) == original.end()) {
      result.warnings.push_back("query " + qid +
                                " missing from original run; skipped");
    }
  }
  if (result.per_query.empty()) {
    throw ValidationError("runs share no query ids");
  }
  result.mean = sum / static_cast<double>(result.per_query.size());
  return result;
}

}  // namespace rankfair
