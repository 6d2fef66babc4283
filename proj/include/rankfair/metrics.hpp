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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rankfair/corpus.hpp"
#include "rankfair/lexicon.hpp"
#include "rankfair/rankings.hpp"

namespace rankfair {

/// Shared knobs for every list-level fairness measure.
///
/// All rank discounts are 1/log_base(r+1); base 2 makes the rank-1 weight
/// exactly 1 and matches common DCG practice. tau is the neutrality
/// threshold: a document whose total representative-term count is <= tau
/// scores a full neutrality of 1. target carries the desired share per group,
/// in group order.
struct FairnessConfig {
  int k = 10;
  int tau = 0;
  double log_base = 2.0;
  std::vector<std::pair<std::string, double>> target;

  static FairnessConfig for_lexicon(const GroupLexicon& lexicon, int k = 10,
                                    int tau = 0, double log_base = 2.0);

  std::size_t group_count() const { return target.size(); }

  /// Attention weight at 1-based rank r.
  double position_bias(int rank) const;

  /// Throws ValidationError unless k >= 1, tau >= 0, log_base > 1, and the
  /// targets are a distribution over at least two groups.
  void validate() const;
};

/// Everything evaluate_query produces for one ranked list. nullopt fields are
/// undefined (empty list, or no representative terms for the representation
/// map) and are excluded from aggregates.
struct QueryFairness {
  std::string query_id;
  std::optional<double> nfairr;
  std::optional<double> texfair;
  std::optional<double> texfair_no_rbdf;
  std::optional<double> awrf_doc;
  std::optional<double> ted;  // rank-bias discounted variant
  std::optional<double> rbdf;
  std::optional<std::vector<double>> group_representation;  // group order
  bool undefined_representation = false;
  bool background_violation = false;  // nfairr computed above 1
};

/// Document neutrality: 1 when the document's representative-term count is
/// at or below tau, otherwise 1 minus the L1 gap between the document's
/// group shares and the target shares.
double neutrality(const DocStats& doc, const FairnessConfig& cfg);

/// Rank-discounted sum of neutrality over the top min(k, n) documents.
double fairr(const RankedList& list, const CorpusIndex& index,
             const FairnessConfig& cfg);

/// Best fairr attainable by reordering the background set: neutralities
/// sorted descending, top k, same discounts. Upper-bounds fairr of any list
/// drawn from the background.
double ifairr(const CorpusIndex& background, const FairnessConfig& cfg);

/// fairr / background_ifairr. Values above 1 mean the list ranked documents
/// outside the background; the value is reported as computed and
/// *background_violation is set. Throws on background_ifairr == 0.
double nfairr(const RankedList& list, const CorpusIndex& index,
              double background_ifairr, const FairnessConfig& cfg,
              bool* background_violation = nullptr);

/// Rank-discounted, length-normalized frequency mass of one group's terms in
/// the top min(k, n): sum of (M_g(d)/|d|)/log(r+1). Zero-length documents
/// contribute nothing.
double term_exposure_sum(const RankedList& list, const CorpusIndex& index,
                         std::string_view group_id, const FairnessConfig& cfg);

/// Share of total representative-term exposure per group, in group order.
/// nullopt when the top-k contains no representative terms at all.
std::optional<std::vector<double>> group_representation(
    const RankedList& list, const CorpusIndex& index,
    const FairnessConfig& cfg);

/// Rank-discounted fraction of top-k documents carrying at least one
/// representative term. nullopt for an empty list.
std::optional<double> rbdf(const RankedList& list, const CorpusIndex& index,
                           const FairnessConfig& cfg);

/// L1 divergence between group representation and target, optionally
/// discounted by rbdf. Defined as 0 when representation is undefined (the
/// discount is 0 in exactly that case; the undiscounted variant follows the
/// same rule so the two stay comparable).
double ted(const RankedList& list, const CorpusIndex& index,
           const FairnessConfig& cfg, bool apply_rbdf = true);

/// Largest value ted can take under these targets: all representation mass
/// on the smallest-target group.
double max_ted(const FairnessConfig& cfg);

/// max_ted - ted; equals 1 - ted for two equal targets.
double texfair(const RankedList& list, const CorpusIndex& index,
               const FairnessConfig& cfg, bool apply_rbdf = true);

enum class AwrfDistance { kTotalVariation, kL1, kL2 };

AwrfDistance awrf_distance_from_string(std::string_view name);

/// Generic attention-weighted rank fairness: accumulates per-document group
/// alignment vectors under the position bias, normalizes to a distribution,
/// and returns its distance to the target. alignments run parallel to the
/// list entries (at least min(k, n) of them, one value per group, each in
/// [0,1]). nullopt when the accumulated exposure is all zero.
std::optional<double> awrf(
    const RankedList& list, std::span<const std::vector<double>> alignments,
    const FairnessConfig& cfg,
    AwrfDistance distance = AwrfDistance::kTotalVariation);

/// Per-group association of one document: M_g / sum(M), or the uniform
/// vector for documents without representative terms.
std::vector<double> doc_association(const DocStats& doc,
                                    const FairnessConfig& cfg);

/// awrf over doc_association alignment vectors taken from the index.
std::optional<double> awrf_doc(
    const RankedList& list, const CorpusIndex& index,
    const FairnessConfig& cfg,
    AwrfDistance distance = AwrfDistance::kTotalVariation);

/// Bundles every per-query metric. background_ifairr comes from ifairr()
/// over the chosen background set (conventionally the whole collection).
QueryFairness evaluate_query(const RankedList& list, const CorpusIndex& index,
                             double background_ifairr,
                             const FairnessConfig& cfg);

}  // namespace rankfair
