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

// End-to-end checks that spawn the built binary; RANKFAIR_CLI_BIN points at
// it (set by ctest).

#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <string>

#include "support/temp.hpp"

using testsupport::TempDir;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

std::string cli_bin() {
  const char* env = std::getenv("RANKFAIR_CLI_BIN");
  REQUIRE_MESSAGE(env != nullptr, "RANKFAIR_CLI_BIN must point at the binary");
  return env;
}

CliResult run_cli(const std::string& args) {
  const std::string command = cli_bin() + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult result;
  char buf[4096];
  while (std::fgets(buf, sizeof(buf), pipe) != nullptr) result.output += buf;
  int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

double parse_metric(const std::string& output, const std::string& run_tag,
                    const std::string& metric) {
  auto line_pos = output.find("run " + run_tag + ":");
  REQUIRE(line_pos != std::string::npos);
  auto key = " " + metric + "=";
  auto pos = output.find(key, line_pos);
  REQUIRE(pos != std::string::npos);
  return std::stod(output.substr(pos + key.size()));
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("index subcommand builds and reports") {
  TempDir tmp;
  auto coll = tmp.write("coll.tsv", "a\tshe plays\nb\the plays\nc\tnothing\n");
  auto lex = testsupport::data_dir() / "gender_lexicon.json";
  auto result = run_cli("index --collection " + q(coll) + " --lexicon " +
                        q(lex) + " --out " + q(tmp.file("x.idx")));
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("indexed 3 documents") != std::string::npos);
  CHECK(std::filesystem::exists(tmp.file("x.idx")));
}

TEST_CASE("index rejects duplicates with exit 2 and missing files with 1") {
  TempDir tmp;
  auto lex = testsupport::data_dir() / "gender_lexicon.json";
  auto dup = tmp.write("dup.tsv", "a\tx\na\ty\n");
  auto result = run_cli("index --collection " + q(dup) + " --lexicon " +
                        q(lex) + " --out " + q(tmp.file("x.idx")));
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("duplicate doc_id: a") != std::string::npos);

  auto missing = run_cli("index --collection " + q(tmp.file("nope.tsv")) +
                         " --lexicon " + q(lex) + " --out " +
                         q(tmp.file("x.idx")));
  CHECK(missing.exit_code == 1);
}

TEST_CASE("evaluate reproduces the bundled two-ranking fixture") {
  TempDir tmp;
  auto data = testsupport::data_dir();
  auto lex = data / "gender_lexicon.json";
  auto idx = tmp.file("fig1.idx");

  REQUIRE(run_cli("index --collection " + q(data / "figure1/collection.tsv") +
                  " --lexicon " + q(lex) + " --out " + q(idx))
              .exit_code == 0);

  auto result = run_cli("evaluate --run " + q(data / "figure1/run_left.txt") +
                        " --run " + q(data / "figure1/run_right.txt") +
                        " --index " + q(idx) + " --lexicon " + q(lex) +
                        " --out-dir " + q(tmp.file("out")));
  REQUIRE(result.exit_code == 0);

  CHECK(parse_metric(result.output, "run_left", "nfairr") == 0.0);
  CHECK(parse_metric(result.output, "run_right", "nfairr") == 0.0);
  CHECK(parse_metric(result.output, "run_left", "texfair") ==
        doctest::Approx(0.8829848).epsilon(1e-4));
  CHECK(parse_metric(result.output, "run_right", "texfair") == 0.0);

  // Two runs were supplied: stats.json carries the paired t-tests.
  auto stats = testsupport::slurp(tmp.file("out") / "stats.json");
  CHECK(stats.find("\"paired_t_tests\"") != std::string::npos);
  CHECK(stats.find("\"texfair\"") != std::string::npos);
  CHECK(std::filesystem::exists(tmp.file("out") / "per_query.csv"));
  CHECK(std::filesystem::exists(tmp.file("out") / "effective_config.json"));

  // Determinism: a rerun produces byte-identical reports.
  auto rerun = run_cli("evaluate --run " + q(data / "figure1/run_left.txt") +
                       " --run " + q(data / "figure1/run_right.txt") +
                       " --index " + q(idx) + " --lexicon " + q(lex) +
                       " --out-dir " + q(tmp.file("out2")));
  REQUIRE(rerun.exit_code == 0);
  CHECK(testsupport::slurp(tmp.file("out") / "per_query.csv") ==
        testsupport::slurp(tmp.file("out2") / "per_query.csv"));
  CHECK(testsupport::slurp(tmp.file("out") / "stats.json") ==
        testsupport::slurp(tmp.file("out2") / "stats.json"));
}

TEST_CASE("evaluate lists unknown documents and exits 2") {
  TempDir tmp;
  auto data = testsupport::data_dir();
  auto lex = data / "gender_lexicon.json";
  auto idx = tmp.file("fig1.idx");
  REQUIRE(run_cli("index --collection " + q(data / "figure1/collection.tsv") +
                  " --lexicon " + q(lex) + " --out " + q(idx))
              .exit_code == 0);

  auto bad_run = tmp.write("bad.run", "q1 Q0 unknown_doc 1 1.0 t\n");
  auto result = run_cli("evaluate --run " + q(bad_run) + " --index " + q(idx) +
                        " --lexicon " + q(lex) + " --out-dir " +
                        q(tmp.file("out")));
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("unknown_doc") != std::string::npos);
}

TEST_CASE("evaluate refuses an index built under another lexicon") {
  TempDir tmp;
  auto data = testsupport::data_dir();
  auto other_lex = tmp.write("other.json",
                             R"({"groups": {"a": ["x"], "b": ["y"]}})");
  auto idx = tmp.file("fig1.idx");
  REQUIRE(run_cli("index --collection " + q(data / "figure1/collection.tsv") +
                  " --lexicon " + q(data / "gender_lexicon.json") + " --out " +
                  q(idx))
              .exit_code == 0);
  auto result =
      run_cli("evaluate --run " + q(data / "figure1/run_left.txt") +
              " --index " + q(idx) + " --lexicon " + q(other_lex) +
              " --out-dir " + q(tmp.file("out")));
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("different lexicon") != std::string::npos);
}

TEST_CASE("cds subcommand transforms and reports") {
  TempDir tmp;
  auto data = testsupport::data_dir();
  auto coll = tmp.write("coll.tsv", "d1\the runs\n");
  auto result = run_cli("cds --collection " + q(coll) + " --mapping " +
                        q(data / "cds_pairs.tsv") + " --out " +
                        q(tmp.file("cf.tsv")) + " --report " +
                        q(tmp.file("report.json")));
  CHECK(result.exit_code == 0);
  CHECK(testsupport::slurp(tmp.file("cf.tsv")) == "d1\tshe runs\n");
  auto report = testsupport::slurp(tmp.file("report.json"));
  CHECK(report.find("\"he->she\": 1") != std::string::npos);

  // Round trip back to the original text.
  auto back = run_cli("cds --collection " + q(tmp.file("cf.tsv")) +
                      " --mapping " + q(data / "cds_pairs.tsv") + " --out " +
                      q(tmp.file("back.tsv")));
  CHECK(back.exit_code == 0);
  CHECK(testsupport::slurp(tmp.file("back.tsv")) ==
        testsupport::slurp(coll));
}

TEST_CASE("crbo subcommand prints the mean and writes per-query values") {
  TempDir tmp;
  auto run_a = tmp.write("a.run",
                         "q1 Q0 a 1 3.0 t\nq1 Q0 b 2 2.0 t\nq1 Q0 c 3 1.0 t\n"
                         "q2 Q0 a 1 3.0 t\nq2 Q0 b 2 2.0 t\nq2 Q0 c 3 1.0 t\n");
  auto run_b = tmp.write("b.run",
                         "q1 Q0 a 1 3.0 t\nq1 Q0 b 2 2.0 t\nq1 Q0 c 3 1.0 t\n"
                         "q2 Q0 a 1 3.0 t\nq2 Q0 c 2 2.0 t\nq2 Q0 b 3 1.0 t\n");
  auto result = run_cli("crbo --run " + q(run_a) + " --counterfactual-run " +
                        q(run_b) + " --depth 3 --out-csv " +
                        q(tmp.file("crbo.csv")));
  REQUIRE(result.exit_code == 0);
  auto pos = result.output.find("mean=");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(result.output.substr(pos + 5)) ==
        doctest::Approx(0.9775).epsilon(1e-6));
  auto csv = testsupport::slurp(tmp.file("crbo.csv"));
  CHECK(csv.find("query_id,rbo\n") == 0);
  CHECK(csv.find("q2,0.955") != std::string::npos);
}

TEST_CASE("sweep subcommand emits the cutoff table") {
  TempDir tmp;
  auto data = testsupport::data_dir();
  auto lex = data / "gender_lexicon.json";
  auto idx = tmp.file("fig1.idx");
  REQUIRE(run_cli("index --collection " + q(data / "figure1/collection.tsv") +
                  " --lexicon " + q(lex) + " --out " + q(idx))
              .exit_code == 0);
  auto result = run_cli("sweep --run " + q(data / "figure1/run_left.txt") +
                        " --index " + q(idx) + " --lexicon " + q(lex) +
                        " --ks 1,2,4 --out " + q(tmp.file("sweep.csv")));
  REQUIRE(result.exit_code == 0);
  auto csv = testsupport::slurp(tmp.file("sweep.csv"));
  CHECK(csv.find("k,nfairr,texfair,texfair_no_rbdf\n") == 0);
  CHECK(csv.find("\n1,") != std::string::npos);
  CHECK(csv.find("\n4,") != std::string::npos);
}

TEST_CASE("help text documents the defaults") {
  auto top = run_cli("--help");
  CHECK(top.exit_code == 0);
  for (const char* sub : {"index", "evaluate", "cds", "crbo", "sweep"}) {
    CHECK(top.output.find(sub) != std::string::npos);
  }

  auto eval = run_cli("evaluate --help");
  CHECK(eval.exit_code == 0);
  CHECK(eval.output.find("--k") != std::string::npos);
  CHECK(eval.output.find("10") != std::string::npos);   // default cutoff
  CHECK(eval.output.find("--tau") != std::string::npos);
  CHECK(eval.output.find("--log-base") != std::string::npos);
  CHECK(eval.output.find("2") != std::string::npos);

  auto crbo_help = run_cli("crbo --help");
  CHECK(crbo_help.exit_code == 0);
  CHECK(crbo_help.output.find("0.9") != std::string::npos);
  CHECK(crbo_help.output.find("extrapolated") != std::string::npos);

  auto bad_flag = run_cli("evaluate --no-such-flag");
  CHECK(bad_flag.exit_code == 2);
}
