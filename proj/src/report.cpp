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

#include "rankfair/report.hpp"

#include <json.hpp>

#include "rankfair/io.hpp"

namespace rankfair {

namespace {

using OrderedJson = nlohmann::ordered_json;

OrderedJson json_metric(std::optional<double> value) {
  if (!value.has_value()) return nullptr;
  return *value;
}

OrderedJson pearson_json(const PearsonResult& result) {
  OrderedJson out;
  out["r"] = json_metric(result.r);
  out["p"] = json_metric(result.p);
  out["n"] = result.n;
  return out;
}

}  // namespace

std::string format_metric(std::optional<double> value) {
  if (!value.has_value()) return "NA";
  return format_double(*value, 10);
}

void write_per_query_csv(const std::vector<MetricReport>& reports,
                         std::ostream& out) {
  out << "run_tag,query_id,nfairr,texfair,texfair_no_rbdf,ted,rbdf,awrf_doc,"
         "undefined_representation";
  if (!reports.empty()) {
    for (const auto& [group, share] : reports.front().config.target) {
      out << ",rep_" << group;
    }
  }
  out << ",mrr,ndcg\n";
  for (const MetricReport& report : reports) {
    for (const QueryRecord& record : report.per_query) {
      const QueryFairness& f = record.fairness;
      out << report.run_tag << ',' << f.query_id << ','
          << format_metric(f.nfairr) << ',' << format_metric(f.texfair) << ','
          << format_metric(f.texfair_no_rbdf) << ',' << format_metric(f.ted)
          << ',' << format_metric(f.rbdf) << ',' << format_metric(f.awrf_doc)
          << ',' << (f.undefined_representation ? 1 : 0);
      for (std::size_t g = 0; g < report.config.target.size(); ++g) {
        if (f.group_representation.has_value()) {
          out << ',' << format_double((*f.group_representation)[g], 10);
        } else {
          out << ",NA";
        }
      }
      out << ',' << format_metric(record.mrr) << ','
          << format_metric(record.ndcg) << '\n';
    }
  }
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "k,nfairr,texfair,texfair_no_rbdf\n";
  for (const SweepRow& row : rows) {
    out << row.k << ',' << format_metric(row.nfairr) << ','
        << format_metric(row.texfair) << ','
        << format_metric(row.texfair_no_rbdf) << '\n';
  }
}

void write_crbo_csv(const CrboResult& result, std::ostream& out) {
  out << "query_id,rbo\n";
  for (const auto& [qid, value] : result.per_query) {
    out << qid << ',' << format_double(value, 10) << '\n';
  }
}

std::string config_json(const FairnessConfig& cfg) {
  OrderedJson target = OrderedJson::object();
  for (const auto& [group, share] : cfg.target) target[group] = share;
  OrderedJson out;
  out["k"] = cfg.k;
  out["tau"] = cfg.tau;
  out["log_base"] = cfg.log_base;
  out["target"] = std::move(target);
  return out.dump(2);
}

std::string stats_json(const std::vector<MetricReport>& reports,
                       const std::vector<ComparedMetric>& comparison) {
  OrderedJson doc;
  if (!reports.empty()) {
    doc["config"] = OrderedJson::parse(config_json(reports.front().config));
  }

  const std::size_t correlation_tests = reports.size();
  OrderedJson runs = OrderedJson::array();
  for (const MetricReport& report : reports) {
    OrderedJson entry;
    entry["tag"] = report.run_tag;
    entry["queries"] = report.queries;
    OrderedJson aggregates = OrderedJson::object();
    for (const auto& [name, value] : report.aggregates) {
      aggregates[name] = value;
    }
    entry["aggregates"] = std::move(aggregates);
    OrderedJson excluded = OrderedJson::object();
    for (const auto& [name, count] : report.excluded) excluded[name] = count;
    entry["excluded"] = std::move(excluded);

    OrderedJson correlation = pearson_json(report.texfair_nfairr);
    if (report.texfair_nfairr.p.has_value()) {
      correlation["p_adjusted"] =
          bonferroni(std::vector<double>{*report.texfair_nfairr.p},
                     correlation_tests)[0];
    } else {
      correlation["p_adjusted"] = nullptr;
    }
    entry["correlation_texfair_nfairr"] = std::move(correlation);
    entry["warnings"] = report.warnings;
    runs.push_back(std::move(entry));
  }
  doc["runs"] = std::move(runs);

  OrderedJson tests = OrderedJson::array();
  for (const ComparedMetric& compared : comparison) {
    OrderedJson entry;
    entry["metric"] = compared.metric;
    entry["t"] = json_metric(compared.test.t);
    entry["p"] = json_metric(compared.test.p);
    entry["p_adjusted"] = json_metric(compared.p_adjusted);
    entry["n"] = compared.test.n;
    entry["zero_variance"] = compared.test.zero_variance;
    tests.push_back(std::move(entry));
  }
  doc["paired_t_tests"] = std::move(tests);
  return doc.dump(2);
}

}  // namespace rankfair
