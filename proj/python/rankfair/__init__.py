# Copyright 2026 The rankfair Authors
#
# Licensed under the Apache License, Version 2.0 (the "License"); you may
# not use this file except in compliance with the License. You may obtain
# a copy of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
# WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
# License for the specific language governing permissions and limitations
# under the License.

"""Group-representation fairness metrics for ranked retrieval results.

The heavy lifting lives in the C++ extension; this package re-exports it.
"""

from rankfair._core import (  # noqa: F401
    TOKENIZER_ID,
    CdsMapping,
    CorpusIndex,
    DocStats,
    FairnessConfig,
    GroupLexicon,
    IoError,
    Qrels,
    QueryFairness,
    RankedList,
    RunEntry,
    ValidationError,
    awrf,
    awrf_doc,
    bonferroni,
    build_index,
    build_index_file,
    cds_transform,
    crbo,
    doc_association,
    evaluate_query,
    fairr,
    group_representation,
    ifairr,
    lexicon_from_dict,
    load_cds_mapping,
    load_index,
    load_lexicon,
    mrr,
    ndcg,
    neutrality,
    nfairr,
    paired_t_test,
    parse_qrels,
    parse_run,
    pearson,
    ranked_list,
    rbdf,
    rbo,
    save_index,
    save_lexicon,
    ted,
    term_exposure_sum,
    texfair,
    tokenize,
    truncate,
    verify_index_lexicon,
)

__version__ = "0.1.0"
