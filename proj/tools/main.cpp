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

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rankfair/analysis.hpp"
#include "rankfair/corpus.hpp"
#include "rankfair/counterfactual.hpp"
#include "rankfair/errors.hpp"
#include "rankfair/lexicon.hpp"
#include "rankfair/metrics.hpp"
#include "rankfair/rankings.hpp"
#include "rankfair/report.hpp"

namespace fs = std::filesystem;
using namespace rankfair;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitValidation = 2;

struct CommonFairnessFlags {
  int k = 10;
  int tau = 0;
  double log_base = 2.0;
  std::vector<std::string> target_overrides;  // group=share

  void add_to(CLI::App& cmd) {
    cmd.add_option("--k", k, "Ranking cutoff")->capture_default_str();
    cmd.add_option("--tau", tau, "Neutrality threshold")->capture_default_str();
    cmd.add_option("--log-base", log_base,
                   "Base of the 1/log(rank+1) position bias")
        ->capture_default_str();
    cmd.add_option("--target", target_overrides,
                   "Target share per group as group=value (repeatable; "
                   "default: lexicon target or uniform)");
  }

  FairnessConfig build(const GroupLexicon& lexicon) const {
    FairnessConfig cfg = FairnessConfig::for_lexicon(lexicon, k, tau, log_base);
    if (!target_overrides.empty()) {
      std::map<std::string, double> overrides;
      for (const std::string& item : target_overrides) {
        std::size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
          throw ValidationError("bad --target value '" + item +
                                "' (expected group=share)");
        }
        overrides[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
      }
      for (auto& [group, share] : cfg.target) {
        auto it = overrides.find(group);
        if (it == overrides.end()) {
          throw ValidationError("--target missing group " + group);
        }
        share = it->second;
      }
      cfg.validate();
    }
    return cfg;
  }
};

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& warning : warnings) {
    std::cerr << "warning: " << warning << "\n";
  }
}

std::string run_tag_for(const fs::path& path, std::size_t ordinal) {
  std::string stem = path.stem().string();
  if (stem.size() > 3 && stem.ends_with(".gz")) {
    stem = stem.substr(0, stem.size() - 3);
  }
  return stem.empty() ? "run" + std::to_string(ordinal + 1) : stem;
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out.is_open()) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<int> parse_ks(const std::string& spec) {
  std::vector<int> ks;
  std::size_t start = 0;
  while (start <= spec.size()) {
    std::size_t comma = spec.find(',', start);
    std::string item = spec.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!item.empty()) ks.push_back(std::stoi(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (ks.empty()) throw ValidationError("--ks has no cutoffs");
  return ks;
}

int cmd_index(const fs::path& collection, const fs::path& lexicon_path,
              const fs::path& out, int workers) {
  const auto started = std::chrono::steady_clock::now();
  GroupLexicon lexicon = load_lexicon(lexicon_path);
  CorpusIndex index = build_index(collection, lexicon, workers);
  save_index(index, out);
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - started)
                           .count();
  std::printf("indexed %zu documents in %.3f s -> %s\n", index.size(),
              static_cast<double>(elapsed) / 1000.0, out.string().c_str());
  return kExitOk;
}

int cmd_evaluate(const std::vector<fs::path>& run_paths, const fs::path& index_path,
                 const fs::path& lexicon_path,
                 const std::optional<fs::path>& qrels_path,
                 const fs::path& out_dir, const CommonFairnessFlags& flags,
                 int workers) {
  GroupLexicon lexicon = load_lexicon(lexicon_path);
  CorpusIndex index = load_index(index_path);
  verify_index_lexicon(index, lexicon);
  FairnessConfig cfg = flags.build(lexicon);

  std::optional<Qrels> qrels;
  if (qrels_path.has_value()) {
    std::vector<std::string> warnings;
    qrels = parse_qrels(*qrels_path, &warnings);
    print_warnings(warnings);
  }

  fs::create_directories(out_dir);
  std::vector<MetricReport> reports;
  for (std::size_t i = 0; i < run_paths.size(); ++i) {
    std::vector<std::string> warnings;
    RunMap run = parse_run(run_paths[i], &warnings);
    print_warnings(warnings);
    MetricReport report =
        evaluate_run(run, index, cfg, qrels ? &*qrels : nullptr,
                     run_tag_for(run_paths[i], i), workers);
    print_warnings(report.warnings);
    reports.push_back(std::move(report));
  }

  std::vector<ComparedMetric> comparison;
  if (reports.size() == 2) comparison = compare_runs(reports[0], reports[1]);

  {
    std::ofstream csv(out_dir / "per_query.csv", std::ios::binary);
    if (!csv.is_open()) {
      throw IoError("cannot write " + (out_dir / "per_query.csv").string());
    }
    write_per_query_csv(reports, csv);
  }
  write_text_file(out_dir / "stats.json", stats_json(reports, comparison));
  write_text_file(out_dir / "effective_config.json", config_json(cfg) + "\n");

  for (const MetricReport& report : reports) {
    std::string line = "run " + report.run_tag + ": queries=" +
                       std::to_string(report.queries);
    for (const char* metric :
         {"nfairr", "texfair", "texfair_no_rbdf", "awrf_doc", "mrr", "ndcg"}) {
      auto it = report.aggregates.find(metric);
      if (it != report.aggregates.end()) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), " %s=%.4f", metric, it->second);
        line += buf;
      }
    }
    std::puts(line.c_str());
  }
  return kExitOk;
}

int cmd_cds(const fs::path& collection, const fs::path& mapping_path,
            const std::optional<fs::path>& pos_path, const fs::path& out,
            const std::optional<fs::path>& report_path, int workers) {
  CdsMapping mapping = load_cds_mapping(mapping_path);
  std::optional<PosAnnotations> pos;
  if (pos_path.has_value()) pos = load_pos_annotations(*pos_path);
  TransformReport report =
      cds_collection(collection, mapping, out, pos ? &*pos : nullptr, workers);
  if (report_path.has_value()) write_transform_report(report, *report_path);
  std::uint64_t total = 0;
  for (const auto& [key, count] : report.substitutions) total += count;
  std::printf("transformed %llu documents (%llu changed, %llu substitutions) -> %s\n",
              static_cast<unsigned long long>(report.documents),
              static_cast<unsigned long long>(report.documents_changed),
              static_cast<unsigned long long>(total), out.string().c_str());
  return kExitOk;
}

int cmd_crbo(const fs::path& original, const fs::path& counterfactual,
             double p, int depth, const std::string& variant,
             const std::optional<fs::path>& out_csv) {
  RboConfig cfg;
  cfg.p = p;
  cfg.depth = depth;
  if (variant == "extrapolated") {
    cfg.variant = RboConfig::Variant::kExtrapolated;
  } else if (variant == "truncated") {
    cfg.variant = RboConfig::Variant::kTruncated;
  } else {
    throw ValidationError("unknown RBO variant '" + variant + "'");
  }

  RunMap run_a = parse_run(original);
  RunMap run_b = parse_run(counterfactual);
  CrboResult result = crbo(run_a, run_b, cfg);
  print_warnings(result.warnings);
  if (out_csv.has_value()) {
    std::ofstream csv(*out_csv, std::ios::binary);
    if (!csv.is_open()) throw IoError("cannot write " + out_csv->string());
    write_crbo_csv(result, csv);
  }
  std::printf("crbo mean=%.6f over %zu queries (p=%.3f depth=%d %s)\n",
              result.mean, result.per_query.size(), cfg.p, cfg.depth,
              variant.c_str());
  return kExitOk;
}

int cmd_sweep(const fs::path& run_path, const fs::path& index_path,
              const fs::path& lexicon_path, const std::string& ks_spec,
              const fs::path& out, const CommonFairnessFlags& flags,
              int workers) {
  GroupLexicon lexicon = load_lexicon(lexicon_path);
  CorpusIndex index = load_index(index_path);
  verify_index_lexicon(index, lexicon);
  FairnessConfig cfg = flags.build(lexicon);
  std::vector<int> ks = parse_ks(ks_spec);

  std::vector<std::string> warnings;
  RunMap run = parse_run(run_path, &warnings);
  print_warnings(warnings);

  std::vector<SweepRow> rows = cutoff_sweep(run, index, cfg, ks, workers);
  std::ofstream csv(out, std::ios::binary);
  if (!csv.is_open()) throw IoError("cannot write " + out.string());
  write_sweep_csv(rows, csv);
  std::printf("swept %zu cutoffs over %zu queries -> %s\n", rows.size(),
              run.size(), out.string().c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "rankfair: group-representation fairness metrics for ranked retrieval "
      "results"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "TOML config file; command-line flags take precedence");

  int workers = 0;
  app.add_option("--workers", workers,
                 "Worker threads (0 = RANKFAIR_WORKERS env or all cores)")
      ->capture_default_str();

  // index
  fs::path collection, lexicon_path, out_path;
  auto* index_cmd =
      app.add_subcommand("index", "Build a per-document statistics index "
                                  "from a collection TSV");
  index_cmd->add_option("--collection", collection, "Collection TSV "
                        "(doc_id<TAB>text)")->required();
  index_cmd->add_option("--lexicon", lexicon_path, "Group lexicon JSON")
      ->required();
  index_cmd->add_option("--out", out_path, "Output index file")->required();

  // evaluate
  std::vector<fs::path> run_paths;
  fs::path eval_index, eval_lexicon, eval_out_dir;
  std::optional<fs::path> qrels_path;
  CommonFairnessFlags eval_flags;
  auto* eval_cmd = app.add_subcommand(
      "evaluate", "Fairness (and optional effectiveness) metrics for runs; "
                  "the whole index is the NFaiRR background set");
  eval_cmd->add_option("--run", run_paths,
                       "TREC run file (give twice to add paired t-tests)")
      ->required()
      ->expected(1, 2);
  eval_cmd->add_option("--index", eval_index, "Index file")->required();
  eval_cmd->add_option("--lexicon", eval_lexicon, "Group lexicon JSON")
      ->required();
  eval_cmd->add_option("--qrels", qrels_path, "TREC qrels for MRR/nDCG");
  eval_cmd->add_option("--out-dir", eval_out_dir,
                       "Directory for per_query.csv, stats.json, "
                       "effective_config.json")
      ->required();
  eval_flags.add_to(*eval_cmd);

  // cds
  fs::path cds_collection_path, cds_mapping, cds_out;
  std::optional<fs::path> pos_path, cds_report;
  auto* cds_cmd = app.add_subcommand(
      "cds", "Write the counterfactual collection (gendered terms swapped)");
  cds_cmd->add_option("--collection", cds_collection_path, "Collection TSV")
      ->required();
  cds_cmd->add_option("--mapping", cds_mapping, "CDS pair TSV")->required();
  cds_cmd->add_option("--pos", pos_path,
                      "Optional POS annotations (doc_id<TAB>token_index<TAB>"
                      "POSS|PRON) overriding the possessive heuristic");
  cds_cmd->add_option("--out", cds_out, "Output collection TSV")->required();
  cds_cmd->add_option("--report", cds_report,
                      "Optional JSON substitution-count report");

  // crbo
  fs::path crbo_a, crbo_b;
  std::optional<fs::path> crbo_csv;
  double rbo_p = 0.9;
  int rbo_depth = 10;
  std::string rbo_variant = "extrapolated";
  auto* crbo_cmd = app.add_subcommand(
      "crbo", "Rank-biased overlap between a run and its counterfactual "
              "re-run");
  crbo_cmd->add_option("--run", crbo_a, "Original run")->required();
  crbo_cmd->add_option("--counterfactual-run", crbo_b,
                       "Run retrieved from the counterfactual collection")
      ->required();
  crbo_cmd->add_option("--p", rbo_p, "RBO persistence")->capture_default_str();
  crbo_cmd->add_option("--depth", rbo_depth, "RBO evaluation depth")
      ->capture_default_str();
  crbo_cmd->add_option("--variant", rbo_variant,
                       "extrapolated or truncated")
      ->capture_default_str();
  crbo_cmd->add_option("--out-csv", crbo_csv, "Optional per-query CSV");

  // sweep
  fs::path sweep_run, sweep_index, sweep_lexicon, sweep_out;
  std::string ks_spec = "10,20,30,40,50,60,70,80,90,100";
  CommonFairnessFlags sweep_flags;
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "Aggregate fairness at several ranking cutoffs (CSV output)");
  sweep_cmd->add_option("--run", sweep_run, "TREC run file")->required();
  sweep_cmd->add_option("--index", sweep_index, "Index file")->required();
  sweep_cmd->add_option("--lexicon", sweep_lexicon, "Group lexicon JSON")
      ->required();
  sweep_cmd->add_option("--ks", ks_spec, "Comma-separated cutoffs")
      ->capture_default_str();
  sweep_cmd->add_option("--out", sweep_out, "Output CSV")->required();
  sweep_flags.add_to(*sweep_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (index_cmd->parsed()) {
      return cmd_index(collection, lexicon_path, out_path, workers);
    }
    if (eval_cmd->parsed()) {
      return cmd_evaluate(run_paths, eval_index, eval_lexicon, qrels_path,
                          eval_out_dir, eval_flags, workers);
    }
    if (cds_cmd->parsed()) {
      return cmd_cds(cds_collection_path, cds_mapping, pos_path, cds_out,
                     cds_report, workers);
    }
    if (crbo_cmd->parsed()) {
      return cmd_crbo(crbo_a, crbo_b, rbo_p, rbo_depth, rbo_variant, crbo_csv);
    }
    if (sweep_cmd->parsed()) {
      return cmd_sweep(sweep_run, sweep_index, sweep_lexicon, ks_spec,
                       sweep_out, sweep_flags, workers);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}
