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

#include <ostream>
#include <string>
#include <vector>

#include "rankfair/analysis.hpp"
#include "rankfair/counterfactual.hpp"

namespace rankfair {

// Report writers. Output is deterministic: fixed column order, query-id
// ordered rows, and %.*g float formatting, so identical inputs produce
// byte-identical files. Undefined values are written as NA.

std::string format_metric(std::optional<double> value);

void write_per_query_csv(const std::vector<MetricReport>& reports,
                         std::ostream& out);

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

void write_crbo_csv(const CrboResult& result, std::ostream& out);

/// stats.json: effective config, per-run aggregates and correlations, and
/// paired t-tests when two runs were evaluated.
std::string stats_json(const std::vector<MetricReport>& reports,
                       const std::vector<ComparedMetric>& comparison);

std::string config_json(const FairnessConfig& cfg);

}  // namespace rankfair
