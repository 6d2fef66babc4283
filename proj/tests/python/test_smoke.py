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

"""Smoke tests for the Python bindings."""

import math
import os
import pathlib

import pytest

import rankfair


def data_dir() -> pathlib.Path:
    return pathlib.Path(os.environ.get("RANKFAIR_DATA_DIR", "data"))


@pytest.fixture(scope="module")
def lexicon():
    return rankfair.lexicon_from_dict(
        [("female", ["she", "her", "woman"]), ("male", ["he", "him", "man"])]
    )


def test_tokenize():
    assert rankfair.tokenize("He plays for Ligue 1!") == [
        "he",
        "plays",
        "for",
        "ligue",
        "1",
    ]
    assert rankfair.tokenize("") == []


def test_lexicon_roundtrip(lexicon):
    assert dict(lexicon.target) == {"female": 0.5, "male": 0.5}
    groups = dict(lexicon.groups)
    assert "she" in groups["female"]
    with pytest.raises(ValueError):
        rankfair.lexicon_from_dict([("a", ["x"]), ("b", ["x"])])


def test_index_and_metrics(lexicon):
    index = rankfair.build_index(
        [
            ("d1", "he plays well"),
            ("d2", "she plays better"),
            ("d3", "nothing gendered"),
        ],
        lexicon,
    )
    assert len(index) == 3
    assert index.doc("d1").magnitudes == [0, 1]

    cfg = rankfair.FairnessConfig.for_lexicon(lexicon)
    ideal = rankfair.ifairr(index, cfg)
    ranking = rankfair.ranked_list("q1", ["d1", "d2", "d3"])
    result = rankfair.evaluate_query(ranking, index, ideal, cfg)
    assert result.texfair is not None
    assert 0.0 <= result.texfair <= 1.0
    assert result.texfair == pytest.approx(1.0 - result.ted)

    balanced = rankfair.ranked_list("q2", ["d1", "d2"])
    rep = rankfair.group_representation(balanced, index, cfg)
    assert rep is not None
    assert sum(rep) == pytest.approx(1.0)


def test_fixture_reproduction():
    lexicon = rankfair.load_lexicon(data_dir() / "gender_lexicon.json")
    index = rankfair.build_index_file(
        data_dir() / "figure1" / "collection.tsv", lexicon
    )
    cfg = rankfair.FairnessConfig.for_lexicon(lexicon)
    ideal = rankfair.ifairr(index, cfg)

    left = rankfair.parse_run(data_dir() / "figure1" / "run_left.txt")["q1"]
    right = rankfair.parse_run(data_dir() / "figure1" / "run_right.txt")["q1"]

    assert rankfair.nfairr(left, index, ideal, cfg)[0] == 0.0
    assert rankfair.nfairr(right, index, ideal, cfg)[0] == 0.0
    assert rankfair.texfair(left, index, cfg) == pytest.approx(0.8829, abs=1e-4)
    assert rankfair.texfair(right, index, cfg) == 0.0


def test_rbo_and_crbo():
    assert rankfair.rbo(["a", "b", "c"], ["a", "c", "b"], depth=3) == pytest.approx(
        0.955, abs=1e-12
    )
    assert rankfair.rbo(["a", "b"], ["x", "y"]) == 0.0

    original = {
        "q1": rankfair.ranked_list("q1", ["a", "b", "c"]),
        "q2": rankfair.ranked_list("q2", ["a", "b", "c"]),
    }
    counterfactual = {
        "q1": rankfair.ranked_list("q1", ["a", "b", "c"]),
        "q2": rankfair.ranked_list("q2", ["a", "c", "b"]),
    }
    per_query, mean, warnings = rankfair.crbo(original, counterfactual, depth=3)
    assert mean == pytest.approx((1.0 + 0.955) / 2, abs=1e-12)
    assert per_query["q1"] == pytest.approx(1.0)
    assert not warnings


def test_cds_transform():
    mapping = rankfair.load_cds_mapping(data_dir() / "cds_pairs.tsv")
    assert rankfair.cds_transform("He plays", mapping) == "She plays"
    assert rankfair.cds_transform("my son", mapping) == "my daughter"
    assert (
        rankfair.cds_transform("her book is hers", mapping, tags={0: "POSS"})
        == "his book is his"
    )


def test_statistics():
    r, p, n = rankfair.pearson([1, 2, 3, 4], [1, 3, 2, 4])
    assert r == pytest.approx(0.8, abs=1e-12)
    assert p == pytest.approx(0.2, abs=1e-9)
    assert n == 4

    t, p, zero_variance = rankfair.paired_t_test([1, 2, 3], [0, 0, 0])
    assert t == pytest.approx(2 * math.sqrt(3), abs=1e-12)
    assert not zero_variance
    assert rankfair.bonferroni([0.5], 3) == [1.0]


def test_effectiveness():
    import tempfile

    run = rankfair.ranked_list("q1", ["d2", "d1"])
    with tempfile.NamedTemporaryFile("w", suffix=".qrels", delete=False) as fh:
        fh.write("q1 0 d1 1\n")
        path = fh.name
    try:
        qrels = rankfair.parse_qrels(path)
        assert rankfair.mrr(run, qrels, 10) == 0.5
        assert rankfair.ndcg(run, qrels, 10) == pytest.approx(
            0.6309297535714574, abs=1e-12
        )
    finally:
        os.unlink(path)
