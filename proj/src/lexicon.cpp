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

#include "rankfair/lexicon.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "rankfair/errors.hpp"
#include "rankfair/io.hpp"
#include "rankfair/tokenizer.hpp"

namespace rankfair {

namespace {

// Group order in the file is semantic (targets, index columns), so objects
// must keep insertion order while parsing.
using OrderedJson = nlohmann::ordered_json;

bool is_lower_token(std::string_view term) {
  if (term.empty()) return false;
  for (char c : term) {
    unsigned char u = static_cast<unsigned char>(c);
    if (c >= 'A' && c <= 'Z') return false;
    if (!is_word_byte(u)) return false;
  }
  return true;
}

}  // namespace

GroupLexicon GroupLexicon::make(std::vector<Group> groups,
                                const std::map<std::string, double>& target) {
  if (groups.size() < 2) {
    throw ValidationError("lexicon needs at least two groups");
  }

  GroupLexicon lex;
  for (std::size_t slot = 0; slot < groups.size(); ++slot) {
    Group& group = groups[slot];
    if (group.id.empty()) throw ValidationError("empty group id");
    for (const auto& other : lex.groups_) {
      if (other.id == group.id) {
        throw ValidationError("duplicate group id: " + group.id);
      }
    }
    if (group.terms.empty()) {
      throw ValidationError("group has no terms: " + group.id);
    }
    for (const auto& term : group.terms) {
      if (!is_lower_token(term)) {
        throw ValidationError("term must be a nonempty lowercase token: '" +
                              term + "' in group " + group.id);
      }
      auto [it, inserted] = lex.term_to_group_.emplace(
          term, static_cast<std::uint32_t>(slot));
      if (!inserted) {
        throw ValidationError("term in multiple groups: '" + term + "' (" +
                              lex.groups_[it->second].id + ", " + group.id +
                              ")");
      }
    }
    lex.groups_.push_back(std::move(group));
  }

  if (target.empty()) {
    lex.target_.assign(lex.groups_.size(),
                       1.0 / static_cast<double>(lex.groups_.size()));
  } else {
    if (target.size() != lex.groups_.size()) {
      throw ValidationError("target must name every group exactly once");
    }
    double sum = 0.0;
    for (const auto& group : lex.groups_) {
      auto it = target.find(group.id);
      if (it == target.end()) {
        throw ValidationError("target missing group: " + group.id);
      }
      if (!(it->second > 0.0) || !(it->second < 1.0)) {
        throw ValidationError("target for " + group.id +
                              " must lie strictly between 0 and 1");
      }
      lex.target_.push_back(it->second);
      sum += it->second;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw ValidationError("targets must sum to 1 (got " +
                            format_double(sum) + ")");
    }
  }

  // Canonical digest: group count, then per group its id and sorted terms,
  // then the targets with full precision.
  std::string canon = "rankfair-lexicon/1\n";
  for (std::size_t i = 0; i < lex.groups_.size(); ++i) {
    canon += lex.groups_[i].id;
    canon += '\x1f';
    for (const auto& term : lex.groups_[i].terms) {
      canon += term;
      canon += '\x1e';
    }
    canon += format_double(lex.target_[i]);
    canon += '\n';
  }
  lex.fingerprint_ = fnv1a64(canon);
  return lex;
}

std::uint32_t GroupLexicon::group_of_term(std::string_view term) const {
  auto it = term_to_group_.find(term);
  return it == term_to_group_.end() ? kNoGroup : it->second;
}

std::optional<std::size_t> GroupLexicon::group_slot(
    std::string_view group_id) const {
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    if (groups_[i].id == group_id) return i;
  }
  return std::nullopt;
}

GroupLexicon load_lexicon(
    const std::filesystem::path& path,
    const std::optional<std::map<std::string, double>>& target) {
  std::ifstream in(path);
  if (!in.is_open()) throw IoError("cannot open " + path.string());

  OrderedJson doc;
  try {
    doc = OrderedJson::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("malformed lexicon " + path.string() + ": " +
                          e.what());
  }

  if (!doc.is_object() || !doc.contains("groups") ||
      !doc["groups"].is_object()) {
    throw ValidationError("lexicon " + path.string() +
                          " must be an object with a \"groups\" object");
  }

  std::vector<GroupLexicon::Group> groups;
  for (const auto& [id, terms] : doc["groups"].items()) {
    if (!terms.is_array()) {
      throw ValidationError("group " + id + " must map to an array of terms");
    }
    GroupLexicon::Group group;
    group.id = id;
    for (const auto& term : terms) {
      if (!term.is_string()) {
        throw ValidationError("group " + id + " contains a non-string term");
      }
      group.terms.insert(term.get<std::string>());
    }
    groups.push_back(std::move(group));
  }

  std::map<std::string, double> effective_target;
  if (target.has_value()) {
    effective_target = *target;
  } else if (doc.contains("target")) {
    if (!doc["target"].is_object()) {
      throw ValidationError("lexicon \"target\" must be an object");
    }
    for (const auto& [id, value] : doc["target"].items()) {
      if (!value.is_number()) {
        throw ValidationError("target for " + id + " must be a number");
      }
      effective_target[id] = value.get<double>();
    }
  }
  return GroupLexicon::make(std::move(groups), effective_target);
}

void save_lexicon(const GroupLexicon& lexicon,
                  const std::filesystem::path& path) {
  OrderedJson doc;
  OrderedJson groups = OrderedJson::object();
  OrderedJson target = OrderedJson::object();
  for (std::size_t i = 0; i < lexicon.groups().size(); ++i) {
    const auto& group = lexicon.groups()[i];
    groups[group.id] =
        std::vector<std::string>(group.terms.begin(), group.terms.end());
    target[group.id] = lexicon.target()[i];
  }
  doc["groups"] = std::move(groups);
  doc["target"] = std::move(target);

  std::ofstream out(path);
  if (!out.is_open()) throw IoError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

const std::string* CdsMapping::plain_lookup(const std::string& lower) const {
  if (auto it = term_pairs.find(lower); it != term_pairs.end()) {
    return &it->second;
  }
  if (auto it = name_pairs.find(lower); it != name_pairs.end()) {
    return &it->second;
  }
  return nullptr;
}

std::vector<std::string> CdsMapping::coverage_gaps(
    const GroupLexicon& lexicon) const {
  std::vector<std::string> gaps;
  auto known = [&](const std::string& term) {
    if (lexicon.group_of_term(term) != GroupLexicon::kNoGroup) return true;
    return name_pairs.find(term) != name_pairs.end();
  };
  for (const auto& [from, to] : term_pairs) {
    if (!known(from)) gaps.push_back(from);
    if (!known(to)) gaps.push_back(to);
  }
  for (const auto& [from, variants] : pos_sensitive) {
    if (!known(from)) gaps.push_back(from);
    if (!known(variants.possessive)) gaps.push_back(variants.possessive);
    if (!known(variants.pronoun)) gaps.push_back(variants.pronoun);
  }
  std::sort(gaps.begin(), gaps.end());
  gaps.erase(std::unique(gaps.begin(), gaps.end()), gaps.end());
  return gaps;
}

namespace {

// The counterpart of x must point back at x; when the counterpart is
// pos-sensitive, one of its usage variants has to.
void check_involution(const CdsMapping& mapping, const std::string& from,
                      const std::string& to) {
  if (auto pos = mapping.pos_sensitive.find(to);
      pos != mapping.pos_sensitive.end()) {
    if (pos->second.possessive != from && pos->second.pronoun != from) {
      throw ValidationError("mapping is not involutory: '" + from + "' -> '" +
                            to + "' but no usage of '" + to + "' maps back");
    }
    return;
  }
  const std::string* back = mapping.plain_lookup(to);
  if (back == nullptr) {
    throw ValidationError("mapping is not involutory: '" + from + "' -> '" +
                          to + "' but '" + to + "' has no entry");
  }
  if (*back != from) {
    throw ValidationError("mapping is not involutory: '" + from + "' -> '" +
                          to + "' -> '" + *back + "'");
  }
}

}  // namespace

CdsMapping load_cds_mapping(const std::filesystem::path& path) {
  LineReader reader(path);
  CdsMapping mapping;
  std::string line;

  auto fail = [&](const std::string& what) -> ValidationError {
    return ValidationError(path.string() + ":" +
                           std::to_string(reader.line_number()) + ": " + what);
  };

  while (reader.next(line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (;;) {
      std::size_t tab = line.find('\t', start);
      if (tab == std::string::npos) {
        cols.push_back(line.substr(start));
        break;
      }
      cols.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    if (cols.size() != 2 && cols.size() != 3) {
      throw fail("expected term<TAB>counterpart<TAB>[tag]");
    }
    const std::string& from = cols[0];
    const std::string& to = cols[1];
    if (from.empty() || to.empty()) throw fail("empty term");
    if (from != to_lower_ascii(from) || to != to_lower_ascii(to)) {
      throw fail("terms must be lowercase");
    }

    auto taken = [&](const std::string& key) {
      return mapping.term_pairs.count(key) != 0 ||
             mapping.name_pairs.count(key) != 0;
    };

    if (cols.size() == 2) {
      if (taken(from) || mapping.pos_sensitive.count(from) != 0) {
        throw fail("duplicate key: " + from);
      }
      mapping.term_pairs.emplace(from, to);
      continue;
    }

    const std::string& tag = cols[2];
    if (tag == "NAME") {
      if (taken(from) || mapping.pos_sensitive.count(from) != 0) {
        throw fail("duplicate key: " + from);
      }
      mapping.name_pairs.emplace(from, to);
    } else if (tag == "POSS" || tag == "PRON") {
      if (taken(from)) throw fail("duplicate key: " + from);
      auto& variants = mapping.pos_sensitive[from];
      std::string& slot =
          (tag == "POSS") ? variants.possessive : variants.pronoun;
      if (!slot.empty()) throw fail("duplicate " + tag + " entry for " + from);
      slot = to;
    } else {
      throw fail("unknown tag '" + tag + "' (expected POSS, PRON or NAME)");
    }
  }

  for (const auto& [from, variants] : mapping.pos_sensitive) {
    if (variants.possessive.empty() || variants.pronoun.empty()) {
      throw ValidationError(path.string() + ": pos-sensitive term '" + from +
                            "' needs both a POSS and a PRON counterpart");
    }
    check_involution(mapping, from, variants.possessive);
    check_involution(mapping, from, variants.pronoun);
  }
  for (const auto& [from, to] : mapping.term_pairs) {
    check_involution(mapping, from, to);
  }
  for (const auto& [from, to] : mapping.name_pairs) {
    if (auto it = mapping.name_pairs.find(to);
        it == mapping.name_pairs.end() || it->second != from) {
      throw ValidationError("name pair is not involutory: '" + from +
                            "' -> '" + to + "'");
    }
  }
  return mapping;
}

}  // namespace rankfair
