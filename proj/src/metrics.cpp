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

#include "rankfair/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "rankfair/errors.hpp"

namespace rankfair {

namespace {

// The ranked documents that actually enter a top-k computation, with missing
// ids reported all at once.
std::vector<const DocStats*> top_k_stats(const RankedList& list,
                                         const CorpusIndex& index, int k) {
  const std::size_t n =
      std::min(list.entries.size(), static_cast<std::size_t>(k));
  std::vector<const DocStats*> stats;
  stats.reserve(n);
  std::string missing;
  for (std::size_t i = 0; i < n; ++i) {
    const DocStats* doc = index.find(list.entries[i].doc_id);
    if (doc == nullptr) {
      if (!missing.empty()) missing += ", ";
      missing += list.entries[i].doc_id;
    } else {
      stats.push_back(doc);
    }
  }
  if (!missing.empty()) {
    throw ValidationError("query " + list.query_id +
                          ": documents missing from index: " + missing);
  }
  return stats;
}

void check_groups(const FairnessConfig& cfg, const CorpusIndex& index) {
  if (cfg.target.size() != index.group_ids().size()) {
    throw ValidationError("config and index disagree on group count");
  }
  for (std::size_t i = 0; i < cfg.target.size(); ++i) {
    if (cfg.target[i].first != index.group_ids()[i]) {
      throw ValidationError("config group order does not match index (" +
                            cfg.target[i].first + " vs " +
                            index.group_ids()[i] + ")");
    }
  }
}

void check_doc_groups(const FairnessConfig& cfg, const DocStats& doc) {
  if (doc.magnitudes.size() != cfg.target.size()) {
    throw ValidationError("document " + doc.doc_id +
                          " carries a different group count than the config");
  }
}

}  // namespace

FairnessConfig FairnessConfig::for_lexicon(const GroupLexicon& lexicon, int k,
                                           int tau, double log_base) {
  FairnessConfig cfg;
  cfg.k = k;
  cfg.tau = tau;
  cfg.log_base = log_base;
  cfg.target.reserve(lexicon.group_count());
  for (std::size_t i = 0; i < lexicon.group_count(); ++i) {
    cfg.target.emplace_back(lexicon.groups()[i].id, lexicon.target()[i]);
  }
  cfg.validate();
  return cfg;
}

double FairnessConfig::position_bias(int rank) const {
  // 1/log_base(rank+1) == ln(base)/ln(rank+1); exact 1.0 at rank 1, base 2.
  return std::log(log_base) / std::log(static_cast<double>(rank) + 1.0);
}

void FairnessConfig::validate() const {
  if (k < 1) throw ValidationError("k must be >= 1");
  if (tau < 0) throw ValidationError("tau must be >= 0");
  if (!(log_base > 1.0)) throw ValidationError("log base must be > 1");
  if (target.size() < 2) {
    throw ValidationError("config needs at least two groups");
  }
  // Lexicon files require targets strictly inside (0,1); a config built by
  // hand may pin a group to 0 or 1 (degenerate but well defined).
  double sum = 0.0;
  for (const auto& [id, share] : target) {
    if (share < 0.0 || share > 1.0) {
      throw ValidationError("target for " + id + " must lie in [0,1]");
    }
    sum += share;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ValidationError("targets must sum to 1");
  }
}

double neutrality(const DocStats& doc, const FairnessConfig& cfg) {
  check_doc_groups(cfg, doc);
  const std::uint64_t total = doc.total_magnitude();
  if (total <= static_cast<std::uint64_t>(cfg.tau)) return 1.0;
  double divergence = 0.0;
  const double denom = static_cast<double>(total);
  for (std::size_t i = 0; i < doc.magnitudes.size(); ++i) {
    divergence += std::abs(static_cast<double>(doc.magnitudes[i]) / denom -
                           cfg.target[i].second);
  }
  return 1.0 - divergence;
}

double fairr(const RankedList& list, const CorpusIndex& index,
             const FairnessConfig& cfg) {
  check_groups(cfg, index);
  auto stats = top_k_stats(list, index, cfg.k);
  double sum = 0.0;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    sum += neutrality(*stats[i], cfg) *
           cfg.position_bias(static_cast<int>(i) + 1);
  }
  return sum;
}

double ifairr(const CorpusIndex& background, const FairnessConfig& cfg) {
  check_groups(cfg, background);
  if (background.empty()) {
    throw ValidationError("ideal fairness needs a nonempty background set");
  }
  std::vector<double> scores;
  scores.reserve(background.size());
  for (const DocStats& doc : background.docs()) {
    scores.push_back(neutrality(doc, cfg));
  }
  std::sort(scores.begin(), scores.end(), std::greater<double>());
  const std::size_t n =
      std::min(scores.size(), static_cast<std::size_t>(cfg.k));
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += scores[i] * cfg.position_bias(static_cast<int>(i) + 1);
  }
  return sum;
}

double nfairr(const RankedList& list, const CorpusIndex& index,
              double background_ifairr, const FairnessConfig& cfg,
              bool* background_violation) {
  if (background_violation != nullptr) *background_violation = false;
  if (background_ifairr == 0.0) {
    throw ValidationError(
        "degenerate background: ideal fairness is zero, NFaiRR undefined");
  }
  const double value = fairr(list, index, cfg) / background_ifairr;
  if (value > 1.0 && background_violation != nullptr) {
    *background_violation = true;
  }
  return value;
}

double term_exposure_sum(const RankedList& list, const CorpusIndex& index,
                         std::string_view group_id,
                         const FairnessConfig& cfg) {
  check_groups(cfg, index);
  std::size_t slot = cfg.target.size();
  for (std::size_t i = 0; i < cfg.target.size(); ++i) {
    if (cfg.target[i].first == group_id) {
      slot = i;
      break;
    }
  }
  if (slot == cfg.target.size()) {
    throw ValidationError("unknown group: " + std::string(group_id));
  }
  auto stats = top_k_stats(list, index, cfg.k);
  double sum = 0.0;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    if (stats[i]->length == 0) continue;
    sum += (static_cast<double>(stats[i]->magnitudes[slot]) /
            static_cast<double>(stats[i]->length)) *
           cfg.position_bias(static_cast<int>(i) + 1);
  }
  return sum;
}

std::optional<std::vector<double>> group_representation(
    const RankedList& list, const CorpusIndex& index,
    const FairnessConfig& cfg) {
  check_groups(cfg, index);
  auto stats = top_k_stats(list, index, cfg.k);
  std::vector<double> exposure(cfg.target.size(), 0.0);
  for (std::size_t i = 0; i < stats.size(); ++i) {
    if (stats[i]->length == 0) continue;
    const double bias = cfg.position_bias(static_cast<int>(i) + 1);
    const double length = static_cast<double>(stats[i]->length);
    for (std::size_t g = 0; g < exposure.size(); ++g) {
      exposure[g] +=
          (static_cast<double>(stats[i]->magnitudes[g]) / length) * bias;
    }
  }
  double total = 0.0;
  for (double e : exposure) total += e;
  if (total == 0.0) return std::nullopt;
  for (double& e : exposure) e /= total;
  return exposure;
}

std::optional<double> rbdf(const RankedList& list, const CorpusIndex& index,
                           const FairnessConfig& cfg) {
  check_groups(cfg, index);
  auto stats = top_k_stats(list, index, cfg.k);
  if (stats.empty()) return std::nullopt;
  double representative = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const double bias = cfg.position_bias(static_cast<int>(i) + 1);
    total += bias;
    if (stats[i]->total_magnitude() >= 1) representative += bias;
  }
  return representative / total;
}

double ted(const RankedList& list, const CorpusIndex& index,
           const FairnessConfig& cfg, bool apply_rbdf) {
  auto representation = group_representation(list, index, cfg);
  if (!representation.has_value()) return 0.0;
  double divergence = 0.0;
  for (std::size_t g = 0; g < representation->size(); ++g) {
    divergence += std::abs((*representation)[g] - cfg.target[g].second);
  }
  if (apply_rbdf) {
    auto factor = rbdf(list, index, cfg);
    divergence *= factor.value_or(0.0);
  }
  return divergence;
}

double max_ted(const FairnessConfig& cfg) {
  double min_target = 1.0;
  for (const auto& [id, share] : cfg.target) {
    min_target = std::min(min_target, share);
  }
  return 2.0 * (1.0 - min_target);
}

double texfair(const RankedList& list, const CorpusIndex& index,
               const FairnessConfig& cfg, bool apply_rbdf) {
  return max_ted(cfg) - ted(list, index, cfg, apply_rbdf);
}

AwrfDistance awrf_distance_from_string(std::string_view name) {
  if (name == "tv") return AwrfDistance::kTotalVariation;
  if (name == "l1") return AwrfDistance::kL1;
  if (name == "l2") return AwrfDistance::kL2;
  throw ValidationError("unknown AWRF distance '" + std::string(name) +
                        "' (expected tv, l1 or l2)");
}

std::optional<double> awrf(const RankedList& list,
                           std::span<const std::vector<double>> alignments,
                           const FairnessConfig& cfg, AwrfDistance distance) {
  cfg.validate();
  const std::size_t n =
      std::min(list.entries.size(), static_cast<std::size_t>(cfg.k));
  if (alignments.size() < n) {
    throw ValidationError("need one alignment vector per ranked document");
  }
  std::vector<double> exposure(cfg.target.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& alignment = alignments[i];
    if (alignment.size() != cfg.target.size()) {
      throw ValidationError("alignment vector has wrong group count");
    }
    const double bias = cfg.position_bias(static_cast<int>(i) + 1);
    for (std::size_t g = 0; g < alignment.size(); ++g) {
      if (alignment[g] < 0.0 || alignment[g] > 1.0) {
        throw ValidationError("alignment values must lie in [0,1]");
      }
      exposure[g] += bias * alignment[g];
    }
  }
  double total = 0.0;
  for (double e : exposure) total += e;
  if (total == 0.0) return std::nullopt;

  double l1 = 0.0;
  double l2 = 0.0;
  for (std::size_t g = 0; g < exposure.size(); ++g) {
    const double gap = exposure[g] / total - cfg.target[g].second;
    l1 += std::abs(gap);
    l2 += gap * gap;
  }
  switch (distance) {
    case AwrfDistance::kTotalVariation:
      return 0.5 * l1;
    case AwrfDistance::kL1:
      return l1;
    case AwrfDistance::kL2:
      return std::sqrt(l2);
  }
  return std::nullopt;  // unreachable
}

std::vector<double> doc_association(const DocStats& doc,
                                    const FairnessConfig& cfg) {
  check_doc_groups(cfg, doc);
  const std::uint64_t total = doc.total_magnitude();
  std::vector<double> alignment(doc.magnitudes.size());
  if (total == 0) {
    std::fill(alignment.begin(), alignment.end(),
              1.0 / static_cast<double>(alignment.size()));
    return alignment;
  }
  for (std::size_t g = 0; g < alignment.size(); ++g) {
    alignment[g] = static_cast<double>(doc.magnitudes[g]) /
                   static_cast<double>(total);
  }
  return alignment;
}

std::optional<double> awrf_doc(const RankedList& list,
                               const CorpusIndex& index,
                               const FairnessConfig& cfg,
                               AwrfDistance distance) {
  check_groups(cfg, index);
  auto stats = top_k_stats(list, index, cfg.k);
  std::vector<std::vector<double>> alignments;
  alignments.reserve(stats.size());
  for (const DocStats* doc : stats) {
    alignments.push_back(doc_association(*doc, cfg));
  }
  return awrf(list, alignments, cfg, distance);
}

QueryFairness evaluate_query(const RankedList& list, const CorpusIndex& index,
                             double background_ifairr,
                             const FairnessConfig& cfg) {
  QueryFairness result;
  result.query_id = list.query_id;
  if (list.entries.empty()) {
    // Degenerate ranking: nothing to measure, every field stays undefined.
    result.undefined_representation = true;
    return result;
  }

  result.nfairr =
      nfairr(list, index, background_ifairr, cfg, &result.background_violation);

  auto representation = group_representation(list, index, cfg);
  result.undefined_representation = !representation.has_value();
  result.rbdf = rbdf(list, index, cfg);

  const double bound = max_ted(cfg);
  if (representation.has_value()) {
    double divergence_no_rbdf = 0.0;
    for (std::size_t g = 0; g < representation->size(); ++g) {
      divergence_no_rbdf +=
          std::abs((*representation)[g] - cfg.target[g].second);
    }
    const double divergence = divergence_no_rbdf * result.rbdf.value_or(0.0);
    result.ted = divergence;
    result.texfair = bound - divergence;
    result.texfair_no_rbdf = bound - divergence_no_rbdf;
    result.group_representation = std::move(*representation);
  } else {
    // No representative terms in the top-k: divergence is taken as 0 in both
    // variants (the discounted one is forced to 0 anyway since rbdf is 0).
    result.ted = 0.0;
    result.texfair = bound;
    result.texfair_no_rbdf = bound;
  }
  result.awrf_doc = awrf_doc(list, index, cfg);
  return result;
}

}  // namespace rankfair
