import json

import pytest
from hypothesis import given, settings, strategies as st

from genkw.data import build_training_pairs, parse_model_output, read_corpus
from genkw.textnorm import normalize_keyword


class TestBuildTrainingPairs:
    def test_input_target_construction(self, tmp_path):
        corpus = tmp_path / "c.jsonl"
        corpus.write_text(
            json.dumps({"id": "a", "title": "T", "abstract": "A", "keywords": ["x", "y"]}) + "\n",
            encoding="utf-8",
        )
        split = tmp_path / "s.json"
        split.write_text(
            json.dumps({"seed": 0, "ratios": {"train": 1.0}, "folds": {"train": ["a"]}}),
            encoding="utf-8",
        )
        pairs, skipped = build_training_pairs(corpus, split, "train")
        assert skipped == 0
        assert pairs[0].source == "T. A"
        assert pairs[0].target == "x, y"

    def test_title_with_terminal_punctuation(self, tmp_path):
        corpus = tmp_path / "c.jsonl"
        corpus.write_text(
            json.dumps({"id": "a", "title": "T?", "abstract": "A", "keywords": ["x"]}) + "\n",
            encoding="utf-8",
        )
        split = tmp_path / "s.json"
        split.write_text(json.dumps({"folds": {"train": ["a"]}}), encoding="utf-8")
        pairs, _ = build_training_pairs(corpus, split, "train")
        assert pairs[0].source == "T? A"

    def test_zero_keyword_doc_excluded_and_counted(self, fixture_corpus, tmp_path, fixture_split):
        with open(fixture_corpus, "a", encoding="utf-8") as fh:
            fh.write(json.dumps({"id": "zz", "title": "t", "abstract": "a", "keywords": []}) + "\n")
        split = tmp_path / "s2.json"
        split.write_text(
            json.dumps({"folds": {"train": [f"d{i:02d}" for i in range(7)] + ["zz"]}}),
            encoding="utf-8",
        )
        pairs, skipped = build_training_pairs(fixture_corpus, split, "train")
        assert skipped == 1
        assert len(pairs) == 7

    def test_target_round_trips_through_parser(self, fixture_corpus, fixture_split):
        pairs, _ = build_training_pairs(fixture_corpus, fixture_split, "train")
        by_id = {r.doc_id: r.keywords for r in read_corpus(fixture_corpus)}
        for pair in pairs:
            assert parse_model_output(pair.target) == by_id[pair.doc_id]


class TestParseModelOutput:
    def test_three_keywords_in_order(self):
        assert parse_model_output("Covid, Omikron, Wielka Brytania") == [
            "Covid",
            "Omikron",
            "Wielka Brytania",
        ]

    def test_trim_and_empty_pieces(self):
        assert parse_model_output(" a ,, b ") == ["a", "b"]

    def test_dedupe_on_normalized_form(self):
        assert parse_model_output("x, X") == ["x"]
        assert parse_model_output("żółć, zolc") == ["żółć"]

    def test_empty_output(self):
        assert parse_model_output("") == []

    @settings(max_examples=1000, deadline=None)
    @given(
        st.lists(
            st.from_regex(r"[a-z0-9]+( [a-z0-9]+){0,3}", fullmatch=True),
            max_size=8,
            unique_by=normalize_keyword,
        )
    )
    def test_round_trip_on_normalized_lists(self, keywords):
        # parse(join(", ")) is the identity on normalized, duplicate-free lists.
        assert parse_model_output(", ".join(keywords)) == keywords
