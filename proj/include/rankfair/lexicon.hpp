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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "rankfair/hash.hpp"

namespace rankfair {

/// Named groups with their representative term sets plus the target share of
/// representation per group. Immutable once constructed; safe to share across
/// threads.
///
/// Invariants enforced at construction:
///   - at least two groups, unique ids, file order preserved
///   - every term nonempty and lowercase, term sets pairwise disjoint
///   - targets in (0,1) and summing to 1 within 1e-9
class GroupLexicon {
 public:
  struct Group {
    std::string id;
    std::set<std::string> terms;  // sorted; gives a canonical fingerprint
  };

  /// Validates and builds. `target` empty means uniform 1/N.
  static GroupLexicon make(std::vector<Group> groups,
                           const std::map<std::string, double>& target = {});

  const std::vector<Group>& groups() const { return groups_; }
  const std::vector<double>& target() const { return target_; }
  std::size_t group_count() const { return groups_.size(); }

  /// Slot of the group owning `term` (terms are disjoint), or npos.
  static constexpr std::uint32_t kNoGroup = 0xffffffffu;
  std::uint32_t group_of_term(std::string_view term) const;

  std::optional<std::size_t> group_slot(std::string_view group_id) const;

  /// Stable 64-bit digest over group ids, terms, and targets. Recorded in
  /// every index built from this lexicon and checked again at metric time.
  std::uint64_t fingerprint() const { return fingerprint_; }

 private:
  GroupLexicon() = default;

  std::vector<Group> groups_;
  std::vector<double> target_;
  std::unordered_map<std::string, std::uint32_t, StringHash, std::equal_to<>>
      term_to_group_;
  std::uint64_t fingerprint_ = 0;
};

/// Reads the lexicon JSON format:
///   {"groups": {"female": ["she", ...], "male": ["he", ...]},
///    "target": {"female": 0.5, "male": 0.5}}
/// "target" is optional both in the file and as an argument; the argument
/// wins over the file, and the default is uniform.
GroupLexicon load_lexicon(
    const std::filesystem::path& path,
    const std::optional<std::map<std::string, double>>& target = std::nullopt);

/// Inverse of load_lexicon up to key ordering inside JSON objects.
void save_lexicon(const GroupLexicon& lexicon,
                  const std::filesystem::path& path);

/// Counterfactual substitution table. term_pairs and name_pairs are directed
/// entries validated to be involutions; pos_sensitive terms carry one
/// counterpart per usage (possessive determiner vs. other pronoun).
struct CdsMapping {
  struct PosVariants {
    std::string possessive;  // e.g. her -> his
    std::string pronoun;     // e.g. her -> him
  };

  std::unordered_map<std::string, std::string> term_pairs;
  std::unordered_map<std::string, std::string> name_pairs;
  std::unordered_map<std::string, PosVariants> pos_sensitive;

  /// Unambiguous replacement for a lowercase token, or nullptr. pos_sensitive
  /// tokens are not resolved here.
  const std::string* plain_lookup(const std::string& lower) const;

  bool is_pos_sensitive(const std::string& lower) const {
    return pos_sensitive.find(lower) != pos_sensitive.end();
  }

  std::size_t size() const {
    return term_pairs.size() + name_pairs.size() + pos_sensitive.size();
  }

  /// Terms in term_pairs (domain and range) that are covered by neither the
  /// lexicon's term sets nor the name table. Empty means full coverage.
  std::vector<std::string> coverage_gaps(const GroupLexicon& lexicon) const;
};

/// Reads the CDS TSV format: one entry per line,
///   term<TAB>counterpart<TAB>[tag]
/// where tag is POSS or PRON for pos-sensitive usages, NAME for name pairs,
/// and absent for plain term pairs. Lines starting with '#' are comments.
/// Both directions of a pair must be present; the loader rejects
/// non-involutory tables and duplicate keys.
CdsMapping load_cds_mapping(const std::filesystem::path& path);

}  // namespace rankfair
