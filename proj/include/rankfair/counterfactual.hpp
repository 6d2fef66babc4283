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
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rankfair/lexicon.hpp"
#include "rankfair/rankings.hpp"

namespace rankfair {

enum class PosTag { kPossessive, kPronoun };

/// 0-based token index -> usage tag, for one document.
using TokenTags = std::map<std::size_t, PosTag>;

/// doc_id -> per-token tags. File format: doc_id<TAB>token_index<TAB>tag with
/// tag in {POSS, PRON}; '#' lines are comments.
using PosAnnotations = std::unordered_map<std::string, TokenTags>;

PosAnnotations load_pos_annotations(const std::filesystem::path& path);

/// Swaps every mapped token of `text` for its counterpart, preserving
/// initial-capital and all-caps casing and leaving everything else byte for
/// byte. pos-sensitive tokens are resolved by `tags` when given, otherwise by
/// a documented heuristic: a following clause-mate token that is not
/// verb-like marks a possessive; a clause boundary right after the token
/// marks a pronoun. `report` (optional) accumulates "from->to" counts.
std::string cds_transform(std::string_view text, const CdsMapping& mapping,
                          const TokenTags* tags = nullptr,
                          std::map<std::string, std::uint64_t>* report = nullptr);

struct TransformReport {
  std::uint64_t documents = 0;
  std::uint64_t documents_changed = 0;
  std::map<std::string, std::uint64_t> substitutions;  // "from->to" -> count
};

/// Rewrites a collection TSV into its counterfactual twin (same doc_ids, same
/// order). Transformation parallelizes over documents; output order matches
/// input order.
TransformReport cds_collection(const std::filesystem::path& collection,
                               const CdsMapping& mapping,
                               const std::filesystem::path& out,
                               const PosAnnotations* pos = nullptr,
                               int workers = 0);

void write_transform_report(const TransformReport& report,
                            const std::filesystem::path& path);

struct RboConfig {
  enum class Variant { kExtrapolated, kTruncated };

  double p = 0.9;
  int depth = 10;
  Variant variant = Variant::kExtrapolated;

  void validate() const;  // 0 < p < 1, depth >= 1
};

/// Rank-biased overlap of two duplicate-free id lists, evaluated to depth
/// D = min(cfg.depth, max(|a|, |b|)) with prefixes capped at list length:
///
///   truncated    = (1-p) * sum_{d=1..D} p^(d-1) * |A_1:d ∩ B_1:d| / d
///   extrapolated = truncated + p^D * X_D / D
///
/// Symmetric, in [0,1]; both lists empty gives 0.
double rbo(std::span<const std::string> a, std::span<const std::string> b,
           const RboConfig& cfg);

struct CrboResult {
  std::vector<std::pair<std::string, double>> per_query;  // query-id order
  double mean = 0.0;
  std::vector<std::string> warnings;
};

/// Per-query rbo between a run and its counterfactual re-run, plus the mean.
/// Queries present on only one side are skipped with a warning; an empty
/// intersection is an error.
CrboResult crbo(const RunMap& original, const RunMap& counterfactual,
                const RboConfig& cfg);

}  // namespace rankfair
