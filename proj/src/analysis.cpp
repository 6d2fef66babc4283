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

#include "rankfair/analysis.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>

#include "rankfair/errors.hpp"
#include "rankfair/parallel.hpp"

namespace rankfair {

namespace {

double two_sided_t_pvalue(double t, double df) {
  if (std::isinf(t)) return 0.0;
  boost::math::students_t_distribution<double> dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

double log2_discount(int rank) {
  return 1.0 / std::log2(static_cast<double>(rank) + 1.0);
}

}  // namespace

std::optional<double> mrr(const RankedList& list, const Qrels& qrels, int k) {
  const auto* grades = qrels.for_query(list.query_id);
  if (grades == nullptr) return std::nullopt;
  const std::size_t n =
      std::min(list.entries.size(), static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < n; ++i) {
    auto it = grades->find(list.entries[i].doc_id);
    if (it != grades->end() && it->second >= 1) {
      return 1.0 / static_cast<double>(i + 1);
    }
  }
  return 0.0;
}

std::optional<double> ndcg(const RankedList& list, const Qrels& qrels, int k) {
  const auto* grades = qrels.for_query(list.query_id);
  if (grades == nullptr) return std::nullopt;

  std::vector<int> ideal;
  ideal.reserve(grades->size());
  for (const auto& [doc, grade] : *grades) {
    if (grade > 0) ideal.push_back(grade);
  }
  if (ideal.empty()) return 0.0;
  std::sort(ideal.begin(), ideal.end(), std::greater<int>());

  double idcg = 0.0;
  const std::size_t ideal_n =
      std::min(ideal.size(), static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < ideal_n; ++i) {
    idcg += static_cast<double>(ideal[i]) * log2_discount(static_cast<int>(i) + 1);
  }

  double dcg = 0.0;
  const std::size_t n =
      std::min(list.entries.size(), static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < n; ++i) {
    auto it = grades->find(list.entries[i].doc_id);
    if (it != grades->end() && it->second > 0) {
      dcg += static_cast<double>(it->second) *
             log2_discount(static_cast<int>(i) + 1);
    }
  }
  return dcg / idcg;
}

PearsonResult pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ValidationError("correlation needs paired samples of equal length");
  }
  if (x.size() < 3) {
    throw ValidationError("correlation needs at least 3 pairs");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw ValidationError("correlation inputs must be finite");
    }
  }

  PearsonResult result;
  result.n = x.size();
  const double n = static_cast<double>(x.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= n;
  mean_y /= n;

  double cov = 0.0;
  double var_x = 0.0;
  double var_y = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    cov += dx * dy;
    var_x += dx * dx;
    var_y += dy * dy;
  }
  if (var_x == 0.0 || var_y == 0.0) return result;  // r undefined

  double r = cov / std::sqrt(var_x * var_y);
  r = std::clamp(r, -1.0, 1.0);
  result.r = r;
  const double df = n - 2.0;
  if (std::abs(r) == 1.0) {
    result.p = 0.0;
  } else {
    const double t = r * std::sqrt(df / (1.0 - r * r));
    result.p = two_sided_t_pvalue(t, df);
  }
  return result;
}

TTestResult paired_t_test(std::span<const double> a,
                          std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ValidationError("paired test needs samples of equal length");
  }
  if (a.size() < 2) {
    throw ValidationError("paired test needs at least 2 pairs");
  }
  TTestResult result;
  result.n = a.size();
  const double n = static_cast<double>(a.size());

  double mean = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) mean += a[i] - b[i];
  mean /= n;
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = (a[i] - b[i]) - mean;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / (n - 1.0));
  if (sd == 0.0) {
    result.zero_variance = true;
    if (mean == 0.0) result.t = 0.0;  // identical samples
    return result;
  }
  const double t = mean / (sd / std::sqrt(n));
  result.t = t;
  result.p = two_sided_t_pvalue(t, n - 1.0);
  return result;
}

std::vector<double> bonferroni(std::span<const double> p_values,
                               std::size_t m) {
  if (m < p_values.size()) {
    throw ValidationError(
        "Bonferroni m must cover the number of tests performed");
  }
  std::vector<double> adjusted;
  adjusted.reserve(p_values.size());
  for (double p : p_values) {
    if (p < 0.0 || p > 1.0) {
      throw ValidationError("p-values must lie in [0,1]");
    }
    adjusted.push_back(std::min(1.0, p * static_cast<double>(m)));
  }
  return adjusted;
}

MetricReport evaluate_run(const RunMap& run, const CorpusIndex& index,
                          const FairnessConfig& cfg, const Qrels* qrels,
                          std::string run_tag, int workers) {
  cfg.validate();
  MetricReport report;
  report.run_tag = std::move(run_tag);
  report.config = cfg;
  report.queries = run.size();

  const double background = ifairr(index, cfg);

  std::vector<const RankedList*> lists;
  lists.reserve(run.size());
  for (const auto& [qid, list] : run) lists.push_back(&list);

  report.per_query.resize(lists.size());
  parallel_for(lists.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      QueryRecord& record = report.per_query[i];
      record.fairness = evaluate_query(*lists[i], index, background, cfg);
      if (qrels != nullptr) {
        record.mrr = mrr(*lists[i], *qrels, cfg.k);
        record.ndcg = ndcg(*lists[i], *qrels, cfg.k);
      }
    }
  });

  for (const QueryRecord& record : report.per_query) {
    if (record.fairness.background_violation) {
      report.warnings.push_back("query " + record.fairness.query_id +
                                ": NFaiRR above 1, ranked documents fall "
                                "outside the background set");
    }
    if (!record.fairness.nfairr.has_value()) {
      report.warnings.push_back("query " + record.fairness.query_id +
                                ": empty ranked list, excluded from "
                                "aggregates");
    }
    if (qrels != nullptr && !record.mrr.has_value()) {
      report.warnings.push_back("query " + record.fairness.query_id +
                                ": no qrels, effectiveness excluded");
    }
  }

  auto aggregate = [&](const std::string& name, auto getter) {
    double sum = 0.0;
    std::size_t included = 0;
    for (const QueryRecord& record : report.per_query) {
      std::optional<double> value = getter(record);
      if (value.has_value()) {
        sum += *value;
        ++included;
      }
    }
    report.excluded[name] = report.per_query.size() - included;
    if (included > 0) {
      report.aggregates[name] = sum / static_cast<double>(included);
    }
  };

  aggregate("nfairr", [](const QueryRecord& r) { return r.fairness.nfairr; });
  aggregate("texfair", [](const QueryRecord& r) { return r.fairness.texfair; });
  aggregate("texfair_no_rbdf",
            [](const QueryRecord& r) { return r.fairness.texfair_no_rbdf; });
  aggregate("ted", [](const QueryRecord& r) { return r.fairness.ted; });
  aggregate("rbdf", [](const QueryRecord& r) { return r.fairness.rbdf; });
  aggregate("awrf_doc",
            [](const QueryRecord& r) { return r.fairness.awrf_doc; });
  if (qrels != nullptr) {
    aggregate("mrr", [](const QueryRecord& r) { return r.mrr; });
    aggregate("ndcg", [](const QueryRecord& r) { return r.ndcg; });
  }

  // Query-level correlation between the two fairness metrics, pairwise
  // deletion for undefined values.
  std::vector<double> xs;
  std::vector<double> ys;
  for (const QueryRecord& record : report.per_query) {
    if (record.fairness.texfair.has_value() &&
        record.fairness.nfairr.has_value()) {
      xs.push_back(*record.fairness.texfair);
      ys.push_back(*record.fairness.nfairr);
    }
  }
  if (xs.size() >= 3) {
    report.texfair_nfairr = pearson(xs, ys);
  } else {
    report.texfair_nfairr.n = xs.size();
    report.warnings.push_back(
        "fewer than 3 queries with defined texfair and nfairr; correlation "
        "skipped");
  }
  return report;
}

std::vector<ComparedMetric> compare_runs(const MetricReport& a,
                                         const MetricReport& b) {
  std::map<std::string, std::map<std::string, double>> a_values;
  auto collect = [](const MetricReport& report,
                    std::map<std::string, std::map<std::string, double>>& out) {
    for (const QueryRecord& record : report.per_query) {
      const std::string& qid = record.fairness.query_id;
      if (record.mrr) out["mrr"][qid] = *record.mrr;
      if (record.ndcg) out["ndcg"][qid] = *record.ndcg;
      if (record.fairness.nfairr) out["nfairr"][qid] = *record.fairness.nfairr;
      if (record.fairness.texfair) {
        out["texfair"][qid] = *record.fairness.texfair;
      }
    }
  };
  std::map<std::string, std::map<std::string, double>> b_values;
  collect(a, a_values);
  collect(b, b_values);

  std::vector<ComparedMetric> results;
  for (const char* metric : {"mrr", "ndcg", "nfairr", "texfair"}) {
    auto ita = a_values.find(metric);
    auto itb = b_values.find(metric);
    if (ita == a_values.end() || itb == b_values.end()) continue;
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& [qid, value] : ita->second) {
      auto match = itb->second.find(qid);
      if (match != itb->second.end()) {
        xs.push_back(value);
        ys.push_back(match->second);
      }
    }
    if (xs.size() < 2) continue;
    ComparedMetric compared;
    compared.metric = metric;
    compared.test = paired_t_test(xs, ys);
    results.push_back(std::move(compared));
  }

  std::size_t m = 0;
  for (const auto& compared : results) {
    if (compared.test.p.has_value()) ++m;
  }
  for (auto& compared : results) {
    if (compared.test.p.has_value()) {
      compared.p_adjusted = bonferroni(std::vector<double>{*compared.test.p},
                                       m)[0];
    }
  }
  return results;
}

std::vector<SweepRow> cutoff_sweep(const RunMap& run, const CorpusIndex& index,
                                   const FairnessConfig& cfg,
                                   std::span<const int> ks, int workers) {
  if (ks.empty()) throw ValidationError("sweep needs at least one cutoff");
  std::vector<SweepRow> rows;
  rows.reserve(ks.size());
  for (int k : ks) {
    if (k < 1) throw ValidationError("cutoffs must be >= 1");
    FairnessConfig at_k = cfg;
    at_k.k = k;
    MetricReport report = evaluate_run(run, index, at_k, nullptr, {}, workers);
    SweepRow row;
    row.k = k;
    if (auto it = report.aggregates.find("nfairr");
        it != report.aggregates.end()) {
      row.nfairr = it->second;
    }
    if (auto it = report.aggregates.find("texfair");
        it != report.aggregates.end()) {
      row.texfair = it->second;
    }
    if (auto it = report.aggregates.find("texfair_no_rbdf");
        it != report.aggregates.end()) {
      row.texfair_no_rbdf = it->second;
    }
    row.included =
        report.per_query.size() - report.excluded.at("texfair");
    rows.push_back(row);
  }
  return rows;
}

}  // namespace rankfair
