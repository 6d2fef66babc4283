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

#include "support/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace oracle {

const Doc& Corpus::at(const std::string& id) const {
  for (const Doc& doc : docs) {
    if (doc.id == id) return doc;
  }
  throw std::runtime_error("oracle corpus misses doc " + id);
}

double position_bias(int rank, double base) {
  return std::log(base) / std::log(static_cast<double>(rank) + 1.0);
}

std::size_t tf(const Doc& doc, const std::string& term) {
  std::size_t count = 0;
  for (const std::string& token : doc.tokens) {
    if (token == term) ++count;
  }
  return count;
}

namespace {

std::size_t magnitude(const Doc& doc, const std::set<std::string>& terms) {
  std::size_t total = 0;
  for (const std::string& term : terms) total += tf(doc, term);
  return total;
}

std::size_t total_magnitude(const Doc& doc, const Groups& groups) {
  std::size_t total = 0;
  for (const auto& [id, terms] : groups.sets) total += magnitude(doc, terms);
  return total;
}

}  // namespace

double omega(const Doc& doc, const Groups& groups, int tau) {
  const std::size_t total = total_magnitude(doc, groups);
  if (total <= static_cast<std::size_t>(tau)) return 1.0;
  double divergence = 0.0;
  for (std::size_t g = 0; g < groups.sets.size(); ++g) {
    const double share = static_cast<double>(magnitude(doc, groups.sets[g].second)) /
                         static_cast<double>(total);
    divergence += std::abs(share - groups.targets[g]);
  }
  return 1.0 - divergence;
}

double fairr(const std::vector<std::string>& ranking, const Corpus& corpus,
             const Groups& groups, int k, int tau, double base) {
  double sum = 0.0;
  const std::size_t n =
      std::min(ranking.size(), static_cast<std::size_t>(k));
  for (std::size_t r = 0; r < n; ++r) {
    sum += omega(corpus.at(ranking[r]), groups, tau) *
           position_bias(static_cast<int>(r) + 1, base);
  }
  return sum;
}

double ifairr(const Corpus& corpus, const Groups& groups, int k, int tau,
              double base) {
  std::vector<double> scores;
  for (const Doc& doc : corpus.docs) scores.push_back(omega(doc, groups, tau));
  std::sort(scores.begin(), scores.end(), std::greater<double>());
  double sum = 0.0;
  const std::size_t n = std::min(scores.size(), static_cast<std::size_t>(k));
  for (std::size_t r = 0; r < n; ++r) {
    sum += scores[r] * position_bias(static_cast<int>(r) + 1, base);
  }
  return sum;
}

std::optional<double> nfairr(const std::vector<std::string>& ranking,
                             const Corpus& corpus, const Groups& groups, int k,
                             int tau, double base) {
  const double ideal = ifairr(corpus, groups, k, tau, base);
  if (ideal == 0.0) return std::nullopt;
  return fairr(ranking, corpus, groups, k, tau, base) / ideal;
}

double term_exposure(const std::vector<std::string>& ranking,
                     const Corpus& corpus, const std::set<std::string>& terms,
                     int k, double base) {
  double sum = 0.0;
  for (const std::string& term : terms) {
    const std::size_t n =
        std::min(ranking.size(), static_cast<std::size_t>(k));
    for (std::size_t r = 0; r < n; ++r) {
      const Doc& doc = corpus.at(ranking[r]);
      if (doc.tokens.empty()) continue;
      sum += (static_cast<double>(tf(doc, term)) /
              static_cast<double>(doc.tokens.size())) *
             position_bias(static_cast<int>(r) + 1, base);
    }
  }
  return sum;
}

std::optional<std::vector<double>> representation(
    const std::vector<std::string>& ranking, const Corpus& corpus,
    const Groups& groups, int k, double base) {
  std::vector<double> exposure;
  double total = 0.0;
  for (const auto& [id, terms] : groups.sets) {
    exposure.push_back(term_exposure(ranking, corpus, terms, k, base));
    total += exposure.back();
  }
  if (total == 0.0) return std::nullopt;
  for (double& e : exposure) e /= total;
  return exposure;
}

std::optional<double> rbdf(const std::vector<std::string>& ranking,
                           const Corpus& corpus, const Groups& groups, int k,
                           double base) {
  const std::size_t n =
      std::min(ranking.size(), static_cast<std::size_t>(k));
  if (n == 0) return std::nullopt;
  double hit = 0.0;
  double all = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const double bias = position_bias(static_cast<int>(r) + 1, base);
    all += bias;
    if (total_magnitude(corpus.at(ranking[r]), groups) >= 1) hit += bias;
  }
  return hit / all;
}

double ted(const std::vector<std::string>& ranking, const Corpus& corpus,
           const Groups& groups, int k, double base, bool apply_rbdf) {
  auto rep = representation(ranking, corpus, groups, k, base);
  if (!rep.has_value()) return 0.0;
  double divergence = 0.0;
  for (std::size_t g = 0; g < rep->size(); ++g) {
    divergence += std::abs((*rep)[g] - groups.targets[g]);
  }
  if (apply_rbdf) {
    divergence *= rbdf(ranking, corpus, groups, k, base).value_or(0.0);
  }
  return divergence;
}

double texfair(const std::vector<std::string>& ranking, const Corpus& corpus,
               const Groups& groups, int k, double base, bool apply_rbdf) {
  double min_target = 1.0;
  for (double t : groups.targets) min_target = std::min(min_target, t);
  return 2.0 * (1.0 - min_target) -
         ted(ranking, corpus, groups, k, base, apply_rbdf);
}

std::optional<double> awrf_doc(const std::vector<std::string>& ranking,
                               const Corpus& corpus, const Groups& groups,
                               int k, double base) {
  const std::size_t n =
      std::min(ranking.size(), static_cast<std::size_t>(k));
  std::vector<double> exposure(groups.sets.size(), 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    const Doc& doc = corpus.at(ranking[r]);
    const std::size_t total = total_magnitude(doc, groups);
    const double bias = position_bias(static_cast<int>(r) + 1, base);
    for (std::size_t g = 0; g < groups.sets.size(); ++g) {
      const double alignment =
          total == 0 ? 1.0 / static_cast<double>(groups.sets.size())
                     : static_cast<double>(magnitude(doc, groups.sets[g].second)) /
                           static_cast<double>(total);
      exposure[g] += bias * alignment;
    }
  }
  double total = 0.0;
  for (double e : exposure) total += e;
  if (total == 0.0) return std::nullopt;
  double tv = 0.0;
  for (std::size_t g = 0; g < exposure.size(); ++g) {
    tv += std::abs(exposure[g] / total - groups.targets[g]);
  }
  return 0.5 * tv;
}

std::pair<double, double> rbo_both(const std::vector<std::string>& a,
                                   const std::vector<std::string>& b, double p,
                                   int depth) {
  const std::size_t horizon =
      std::min(static_cast<std::size_t>(depth), std::max(a.size(), b.size()));
  if (horizon == 0) return {0.0, 0.0};
  double sum = 0.0;
  std::size_t last_overlap = 0;
  for (std::size_t d = 1; d <= horizon; ++d) {
    std::set<std::string> pa(a.begin(),
                             a.begin() + std::min(d, a.size()));
    std::set<std::string> pb(b.begin(),
                             b.begin() + std::min(d, b.size()));
    std::size_t overlap = 0;
    for (const std::string& id : pa) overlap += pb.count(id);
    last_overlap = overlap;
    sum += std::pow(p, static_cast<double>(d - 1)) *
           static_cast<double>(overlap) / static_cast<double>(d);
  }
  const double truncated = (1.0 - p) * sum;
  const double extrapolated =
      truncated + std::pow(p, static_cast<double>(horizon)) *
                      static_cast<double>(last_overlap) /
                      static_cast<double>(horizon);
  return {truncated, extrapolated};
}

double rbo(const std::vector<std::string>& a, const std::vector<std::string>& b,
           double p, int depth, bool extrapolated) {
  auto [truncated, ext] = rbo_both(a, b, p, depth);
  return extrapolated ? ext : truncated;
}

rankfair::GroupLexicon to_lexicon(const Groups& groups) {
  std::vector<rankfair::GroupLexicon::Group> converted;
  std::map<std::string, double> target;
  for (std::size_t g = 0; g < groups.sets.size(); ++g) {
    converted.push_back({groups.sets[g].first, groups.sets[g].second});
    target[groups.sets[g].first] = groups.targets[g];
  }
  return rankfair::GroupLexicon::make(std::move(converted), target);
}

rankfair::CorpusIndex to_index(const Corpus& corpus,
                               const rankfair::GroupLexicon& lexicon) {
  std::vector<std::pair<std::string, std::string>> docs;
  for (const Doc& doc : corpus.docs) {
    std::string text;
    for (const std::string& token : doc.tokens) {
      if (!text.empty()) text += ' ';
      text += token;
    }
    docs.emplace_back(doc.id, text);
  }
  return rankfair::build_index(docs, lexicon, 1);
}

rankfair::RankedList to_ranked_list(const std::vector<std::string>& ids,
                                    const std::string& query_id) {
  rankfair::RankedList list;
  list.query_id = query_id;
  int rank = 1;
  for (const std::string& id : ids) {
    list.entries.push_back(
        {id, rank, 1000.0 - static_cast<double>(rank)});
    ++rank;
  }
  return list;
}

rankfair::FairnessConfig to_config(const Groups& groups, int k, int tau,
                                   double base) {
  rankfair::FairnessConfig cfg;
  cfg.k = k;
  cfg.tau = tau;
  cfg.log_base = base;
  for (std::size_t g = 0; g < groups.sets.size(); ++g) {
    cfg.target.emplace_back(groups.sets[g].first, groups.targets[g]);
  }
  cfg.validate();
  return cfg;
}

MicroInstance random_micro(std::mt19937_64& rng) {
  auto pick = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };

  MicroInstance instance;
  const int group_count = pick(2, 3);
  // Vocabulary: two representative terms per group plus neutral filler.
  std::vector<std::string> vocab;
  for (int g = 0; g < group_count; ++g) {
    auto& [id, terms] =
        instance.groups.sets.emplace_back("g" + std::to_string(g),
                                          std::set<std::string>{});
    terms.insert("t" + std::to_string(g) + "a");
    terms.insert("t" + std::to_string(g) + "b");
    vocab.insert(vocab.end(), terms.begin(), terms.end());
  }
  for (int i = 0; i < 5; ++i) vocab.push_back("n" + std::to_string(i));

  if (pick(0, 1) == 0) {
    instance.groups.targets.assign(group_count, 1.0 / group_count);
  } else {
    double sum = 0.0;
    std::vector<double> raw(group_count);
    for (double& v : raw) {
      v = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
      sum += v;
    }
    for (double& v : raw) v /= sum;
    instance.groups.targets = raw;
  }

  const int doc_count = pick(1, 8);
  for (int d = 0; d < doc_count; ++d) {
    Doc doc;
    doc.id = "d" + std::to_string(d);
    const int len = pick(0, 6);
    for (int t = 0; t < len; ++t) {
      doc.tokens.push_back(vocab[static_cast<std::size_t>(
          pick(0, static_cast<int>(vocab.size()) - 1))]);
    }
    instance.corpus.docs.push_back(std::move(doc));
  }

  std::vector<std::string> ids;
  for (const Doc& doc : instance.corpus.docs) ids.push_back(doc.id);
  std::shuffle(ids.begin(), ids.end(), rng);
  const int list_len = pick(1, std::min<int>(5, static_cast<int>(ids.size())));
  instance.ranking.assign(ids.begin(), ids.begin() + list_len);

  instance.k = pick(1, 5);
  instance.tau = pick(0, 2);
  return instance;
}

}  // namespace oracle
