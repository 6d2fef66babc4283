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

#include "rankfair/metrics.hpp"
#include "rankfair/rankings.hpp"

namespace rankfair {

/// Reciprocal rank of the first relevant document (grade >= 1) within top-k,
/// 0 when none is retrieved; nullopt when the query has no qrels at all.
std::optional<double> mrr(const RankedList& list, const Qrels& qrels, int k);

/// nDCG@k with gains equal to the raw grades and a fixed log2 discount
/// (independent of the fairness log base). 0 when the query has no relevant
/// documents; nullopt when the query has no qrels at all.
std::optional<double> ndcg(const RankedList& list, const Qrels& qrels, int k);

struct PearsonResult {
  std::optional<double> r;  // unset when either side has zero variance
  std::optional<double> p;  // two-sided, t distribution with n-2 df
  std::size_t n = 0;
};

/// Sample Pearson correlation over paired values. Requires at least 3 finite
/// pairs.
PearsonResult pearson(std::span<const double> x, std::span<const double> y);

struct TTestResult {
  std::optional<double> t;
  std::optional<double> p;  // two-sided
  std::size_t n = 0;
  bool zero_variance = false;  // differences had no spread; p undefined
};

/// Standard paired t-test over same-length samples, n >= 2.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

/// min(1, p*m) for each p. m must cover the number of tests.
std::vector<double> bonferroni(std::span<const double> p_values,
                               std::size_t m);

struct QueryRecord {
  QueryFairness fairness;
  std::optional<double> mrr;
  std::optional<double> ndcg;
};

/// Per-query metrics for one run plus the aggregate means, exclusion counts,
/// and the per-query correlation between texfair and nfairr. Aggregates are
/// arithmetic means over queries with defined values.
struct MetricReport {
  std::string run_tag;
  FairnessConfig config;
  std::vector<QueryRecord> per_query;  // query-id order
  std::map<std::string, double> aggregates;
  std::map<std::string, std::size_t> excluded;
  std::size_t queries = 0;
  PearsonResult texfair_nfairr;
  std::vector<std::string> warnings;
};

/// Evaluates every query of a run against the index (whole collection as the
/// NFaiRR background). Queries run in parallel; results keep query-id order.
MetricReport evaluate_run(const RunMap& run, const CorpusIndex& index,
                          const FairnessConfig& cfg,
                          const Qrels* qrels = nullptr,
                          std::string run_tag = {}, int workers = 0);

struct ComparedMetric {
  std::string metric;
  TTestResult test;
  std::optional<double> p_adjusted;
};

/// Paired t-tests between two reports over their common queries, one per
/// metric present in both, Bonferroni-adjusted over the number of tests run.
std::vector<ComparedMetric> compare_runs(const MetricReport& a,
                                         const MetricReport& b);

struct SweepRow {
  int k = 0;
  std::optional<double> nfairr;
  std::optional<double> texfair;
  std::optional<double> texfair_no_rbdf;
  std::size_t included = 0;
};

/// Aggregate means at each cutoff; the ideal-fairness normalizer is
/// recomputed per k.
std::vector<SweepRow> cutoff_sweep(const RunMap& run, const CorpusIndex& index,
                                   const FairnessConfig& cfg,
                                   std::span<const int> ks, int workers = 0);

}  // namespace rankfair
