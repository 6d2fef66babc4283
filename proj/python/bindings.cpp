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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "rankfair/analysis.hpp"
#include "rankfair/corpus.hpp"
#include "rankfair/counterfactual.hpp"
#include "rankfair/errors.hpp"
#include "rankfair/lexicon.hpp"
#include "rankfair/metrics.hpp"
#include "rankfair/rankings.hpp"
#include "rankfair/tokenizer.hpp"

namespace py = pybind11;
using namespace rankfair;

namespace {

GroupLexicon lexicon_from_dict(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& groups,
    const std::optional<std::map<std::string, double>>& target) {
  std::vector<GroupLexicon::Group> converted;
  for (const auto& [id, terms] : groups) {
    converted.push_back(
        {id, std::set<std::string>(terms.begin(), terms.end())});
  }
  return GroupLexicon::make(std::move(converted),
                            target.value_or(std::map<std::string, double>{}));
}

FairnessConfig make_config(
    int k, int tau, double log_base,
    const std::vector<std::pair<std::string, double>>& target) {
  FairnessConfig cfg;
  cfg.k = k;
  cfg.tau = tau;
  cfg.log_base = log_base;
  cfg.target = target;
  cfg.validate();
  return cfg;
}

RankedList ranked_list_from_ids(const std::string& query_id,
                                const std::vector<std::string>& doc_ids) {
  RankedList list;
  list.query_id = query_id;
  int rank = 1;
  for (const auto& id : doc_ids) {
    list.entries.push_back(
        {id, rank, static_cast<double>(doc_ids.size() - rank + 1)});
    ++rank;
  }
  return list;
}

RboConfig make_rbo_config(double p, int depth, const std::string& variant) {
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
  cfg.validate();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Group-representation fairness metrics for ranked retrieval "
            "results";

  py::register_exception<ValidationError>(m, "ValidationError",
                                          PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.attr("TOKENIZER_ID") = std::string(kTokenizerId);
  m.def("tokenize", [](const std::string& text) { return tokenize(text); },
        py::arg("text"));

  py::class_<GroupLexicon>(m, "GroupLexicon")
      .def_property_readonly("groups",
                             [](const GroupLexicon& lex) {
                               std::vector<std::pair<std::string,
                                                     std::vector<std::string>>>
                                   out;
                               for (const auto& group : lex.groups()) {
                                 out.emplace_back(
                                     group.id,
                                     std::vector<std::string>(
                                         group.terms.begin(),
                                         group.terms.end()));
                               }
                               return out;
                             })
      .def_property_readonly("target",
                             [](const GroupLexicon& lex) {
                               std::map<std::string, double> out;
                               for (std::size_t i = 0; i < lex.group_count();
                                    ++i) {
                                 out[lex.groups()[i].id] = lex.target()[i];
                               }
                               return out;
                             })
      .def_property_readonly("fingerprint", &GroupLexicon::fingerprint);

  m.def("load_lexicon", &load_lexicon, py::arg("path"),
        py::arg("target") = std::nullopt);
  m.def("save_lexicon", &save_lexicon, py::arg("lexicon"), py::arg("path"));
  m.def("lexicon_from_dict", &lexicon_from_dict, py::arg("groups"),
        py::arg("target") = std::nullopt,
        "Builds a lexicon from [(group_id, [terms...]), ...]");

  py::class_<CdsMapping>(m, "CdsMapping")
      .def_property_readonly("size", &CdsMapping::size)
      .def("is_pos_sensitive", &CdsMapping::is_pos_sensitive)
      .def("coverage_gaps", &CdsMapping::coverage_gaps);
  m.def("load_cds_mapping", &load_cds_mapping, py::arg("path"));

  py::class_<DocStats>(m, "DocStats")
      .def_readonly("doc_id", &DocStats::doc_id)
      .def_readonly("length", &DocStats::length)
      .def_readonly("magnitudes", &DocStats::magnitudes)
      .def_property_readonly("total_magnitude", &DocStats::total_magnitude);

  py::class_<CorpusIndex>(m, "CorpusIndex")
      .def_property_readonly("group_ids", &CorpusIndex::group_ids)
      .def_property_readonly("tokenizer_id", &CorpusIndex::tokenizer_id)
      .def_property_readonly("lexicon_fingerprint",
                             &CorpusIndex::lexicon_fingerprint)
      .def("__len__", &CorpusIndex::size)
      .def("doc",
           [](const CorpusIndex& index, const std::string& doc_id) {
             const DocStats* stats = index.find(doc_id);
             if (stats == nullptr) {
               throw py::key_error("doc_id not in index: " + doc_id);
             }
             return *stats;
           },
           py::arg("doc_id"));

  m.def("build_index",
        [](const std::vector<std::pair<std::string, std::string>>& docs,
           const GroupLexicon& lexicon, int workers) {
          return build_index(docs, lexicon, workers);
        },
        py::arg("docs"), py::arg("lexicon"), py::arg("workers") = 0,
        "Builds an index from [(doc_id, text), ...]");
  m.def("build_index_file",
        [](const std::filesystem::path& path, const GroupLexicon& lexicon,
           int workers) { return build_index(path, lexicon, workers); },
        py::arg("path"), py::arg("lexicon"), py::arg("workers") = 0);
  m.def("save_index", &save_index, py::arg("index"), py::arg("path"));
  m.def("load_index", &load_index, py::arg("path"));
  m.def("verify_index_lexicon", &verify_index_lexicon, py::arg("index"),
        py::arg("lexicon"));

  py::class_<RunEntry>(m, "RunEntry")
      .def_readonly("doc_id", &RunEntry::doc_id)
      .def_readonly("rank", &RunEntry::rank)
      .def_readonly("score", &RunEntry::score);

  py::class_<RankedList>(m, "RankedList")
      .def_readonly("query_id", &RankedList::query_id)
      .def_readonly("entries", &RankedList::entries)
      .def("doc_ids", [](const RankedList& list) {
        std::vector<std::string> out;
        for (const auto& entry : list.entries) out.push_back(entry.doc_id);
        return out;
      });

  m.def("ranked_list", &ranked_list_from_ids, py::arg("query_id"),
        py::arg("doc_ids"),
        "RankedList from already-ordered doc ids (synthetic scores)");
  m.def("parse_run",
        [](const std::filesystem::path& path) { return parse_run(path); },
        py::arg("path"));
  m.def("truncate", &rankfair::truncate, py::arg("list"), py::arg("k"));

  py::class_<Qrels>(m, "Qrels").def_readonly("grades", &Qrels::grades);
  m.def("parse_qrels",
        [](const std::filesystem::path& path) { return parse_qrels(path); },
        py::arg("path"));

  py::class_<FairnessConfig>(m, "FairnessConfig")
      .def(py::init(&make_config), py::arg("k") = 10, py::arg("tau") = 0,
           py::arg("log_base") = 2.0,
           py::arg("target") =
               std::vector<std::pair<std::string, double>>{{"female", 0.5},
                                                           {"male", 0.5}})
      .def_static("for_lexicon", &FairnessConfig::for_lexicon,
                  py::arg("lexicon"), py::arg("k") = 10, py::arg("tau") = 0,
                  py::arg("log_base") = 2.0)
      .def_readonly("k", &FairnessConfig::k)
      .def_readonly("tau", &FairnessConfig::tau)
      .def_readonly("log_base", &FairnessConfig::log_base)
      .def_readonly("target", &FairnessConfig::target)
      .def("position_bias", &FairnessConfig::position_bias, py::arg("rank"));

  py::class_<QueryFairness>(m, "QueryFairness")
      .def_readonly("query_id", &QueryFairness::query_id)
      .def_readonly("nfairr", &QueryFairness::nfairr)
      .def_readonly("texfair", &QueryFairness::texfair)
      .def_readonly("texfair_no_rbdf", &QueryFairness::texfair_no_rbdf)
      .def_readonly("awrf_doc", &QueryFairness::awrf_doc)
      .def_readonly("ted", &QueryFairness::ted)
      .def_readonly("rbdf", &QueryFairness::rbdf)
      .def_readonly("group_representation",
                    &QueryFairness::group_representation)
      .def_readonly("undefined_representation",
                    &QueryFairness::undefined_representation)
      .def_readonly("background_violation",
                    &QueryFairness::background_violation);

  m.def("neutrality", &neutrality, py::arg("doc"), py::arg("cfg"));
  m.def("fairr", &fairr, py::arg("list"), py::arg("index"), py::arg("cfg"));
  m.def("ifairr", &ifairr, py::arg("background"), py::arg("cfg"));
  m.def("nfairr",
        [](const RankedList& list, const CorpusIndex& index,
           double background_ifairr, const FairnessConfig& cfg) {
          bool violation = false;
          double value = nfairr(list, index, background_ifairr, cfg,
                                &violation);
          return py::make_tuple(value, violation);
        },
        py::arg("list"), py::arg("index"), py::arg("background_ifairr"),
        py::arg("cfg"), "Returns (value, background_violation)");
  m.def("term_exposure_sum", &term_exposure_sum, py::arg("list"),
        py::arg("index"), py::arg("group_id"), py::arg("cfg"));
  m.def("group_representation", &group_representation, py::arg("list"),
        py::arg("index"), py::arg("cfg"));
  m.def("rbdf", &rbdf, py::arg("list"), py::arg("index"), py::arg("cfg"));
  m.def("ted", &ted, py::arg("list"), py::arg("index"), py::arg("cfg"),
        py::arg("apply_rbdf") = true);
  m.def("texfair", &texfair, py::arg("list"), py::arg("index"), py::arg("cfg"),
        py::arg("apply_rbdf") = true);
  m.def("awrf",
        [](const RankedList& list,
           const std::vector<std::vector<double>>& alignments,
           const FairnessConfig& cfg, const std::string& distance) {
          return awrf(list, alignments, cfg,
                      awrf_distance_from_string(distance));
        },
        py::arg("list"), py::arg("alignments"), py::arg("cfg"),
        py::arg("distance") = "tv");
  m.def("doc_association", &doc_association, py::arg("doc"), py::arg("cfg"));
  m.def("awrf_doc",
        [](const RankedList& list, const CorpusIndex& index,
           const FairnessConfig& cfg, const std::string& distance) {
          return awrf_doc(list, index, cfg,
                          awrf_distance_from_string(distance));
        },
        py::arg("list"), py::arg("index"), py::arg("cfg"),
        py::arg("distance") = "tv");
  m.def("evaluate_query", &evaluate_query, py::arg("list"), py::arg("index"),
        py::arg("background_ifairr"), py::arg("cfg"));

  m.def("cds_transform",
        [](const std::string& text, const CdsMapping& mapping,
           const std::optional<std::map<std::size_t, std::string>>& tags) {
          if (!tags.has_value()) return cds_transform(text, mapping);
          TokenTags converted;
          for (const auto& [index, tag] : *tags) {
            if (tag == "POSS") {
              converted[index] = PosTag::kPossessive;
            } else if (tag == "PRON") {
              converted[index] = PosTag::kPronoun;
            } else {
              throw ValidationError("unknown tag '" + tag + "'");
            }
          }
          return cds_transform(text, mapping, &converted);
        },
        py::arg("text"), py::arg("mapping"), py::arg("tags") = std::nullopt);
  m.def("rbo",
        [](const std::vector<std::string>& a, const std::vector<std::string>& b,
           double p, int depth, const std::string& variant) {
          return rbo(a, b, make_rbo_config(p, depth, variant));
        },
        py::arg("a"), py::arg("b"), py::arg("p") = 0.9, py::arg("depth") = 10,
        py::arg("variant") = "extrapolated");
  m.def("crbo",
        [](const RunMap& original, const RunMap& counterfactual, double p,
           int depth, const std::string& variant) {
          auto result =
              crbo(original, counterfactual, make_rbo_config(p, depth, variant));
          std::map<std::string, double> per_query(result.per_query.begin(),
                                                  result.per_query.end());
          return py::make_tuple(per_query, result.mean, result.warnings);
        },
        py::arg("original"), py::arg("counterfactual"), py::arg("p") = 0.9,
        py::arg("depth") = 10, py::arg("variant") = "extrapolated",
        "Returns (per_query, mean, warnings)");

  m.def("mrr", &mrr, py::arg("list"), py::arg("qrels"), py::arg("k") = 10);
  m.def("ndcg", &ndcg, py::arg("list"), py::arg("qrels"), py::arg("k") = 10);
  m.def("pearson",
        [](const std::vector<double>& x, const std::vector<double>& y) {
          auto result = pearson(x, y);
          return py::make_tuple(result.r, result.p, result.n);
        },
        py::arg("x"), py::arg("y"), "Returns (r, p, n)");
  m.def("paired_t_test",
        [](const std::vector<double>& a, const std::vector<double>& b) {
          auto result = paired_t_test(a, b);
          return py::make_tuple(result.t, result.p, result.zero_variance);
        },
        py::arg("a"), py::arg("b"), "Returns (t, p, zero_variance)");
  m.def("bonferroni",
        [](const std::vector<double>& p_values, std::size_t m_tests) {
          return bonferroni(p_values, m_tests);
        },
        py::arg("p_values"), py::arg("m"));
}
