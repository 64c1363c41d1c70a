import json
from pathlib import Path

import pytest

from kwex.cli import main, manifest_to_argv

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS = str(FIXTURES / "corpus10.jsonl")
VECTORS = str(FIXTURES / "vectors8.txt")


def run(*argv):
    return main(list(argv))


class TestStats:
    def test_matches_frozen_oracle_json(self, tmp_path):
        out = tmp_path / "stats.json"
        assert run("stats", "--corpus", CORPUS, "--output", str(out)) == 0
        got = json.loads(out.read_text(encoding="utf-8"))
        want = json.loads((FIXTURES / "corpus10_stats.json").read_text(encoding="utf-8"))
        assert got == want

    def test_empty_corpus_is_data_error(self, tmp_path):
        empty = tmp_path / "empty.jsonl"
        empty.write_text("", encoding="utf-8")
        out = tmp_path / "stats.json"
        assert run("stats", "--corpus", str(empty), "--output", str(out)) == 2

    def test_min_docs_flag_adds_threshold(self, tmp_path):
        out = tmp_path / "stats.json"
        assert run("stats", "--corpus", CORPUS, "--output", str(out), "--min-docs", "3") == 0
        got = json.loads(out.read_text(encoding="utf-8"))
        assert "3" in got["all_documents"]["count_with_min_docs"]


class TestSplitCommand:
    def test_writes_split_and_manifest(self, tmp_path):
        out = tmp_path / "split.json"
        assert run("split", "--corpus", CORPUS, "--output", str(out), "--seed", "7") == 0
        obj = json.loads(out.read_text(encoding="utf-8"))
        assert obj["seed"] == 7
        ids = sorted(obj["folds"]["train"] + obj["folds"]["test"])
        assert ids == [f"p{i:02d}" for i in range(1, 11)]
        assert (tmp_path / "split.json.manifest.json").exists()


class TestExtract:
    @pytest.mark.parametrize("method", ["tfidf", "textrank", "firstphrases", "cvalue", "ncvalue"])
    def test_methods_produce_predictions(self, tmp_path, method):
        out = tmp_path / "preds.jsonl"
        assert run("extract", "--corpus", CORPUS, "--method", method, "--output", str(out)) == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 10
        first = json.loads(lines[0])
        assert first["id"] == "p01"
        assert first["method"] == method
        assert first["keywords"]

    def test_keybert_requires_vectors_flag(self, tmp_path):
        out = tmp_path / "preds.jsonl"
        code = run("extract", "--corpus", CORPUS, "--method", "keybert", "--output", str(out))
        assert code == 1

    def test_keybert_with_vectors(self, tmp_path):
        out = tmp_path / "preds.jsonl"
        code = run(
            "extract", "--corpus", CORPUS, "--method", "keybert",
            "--output", str(out), "--vectors", VECTORS, "--ngram-max", "2",
        )
        assert code == 0
        assert len(out.read_text(encoding="utf-8").splitlines()) == 10

    def test_ngram_max_defaults_per_method(self, tmp_path):
        # keybert defaults to bigram candidates; other extractors to 5.
        kb = tmp_path / "kb.jsonl"
        run("extract", "--corpus", CORPUS, "--method", "keybert",
            "--output", str(kb), "--vectors", VECTORS)
        manifest = json.loads((tmp_path / "kb.jsonl.manifest.json").read_text(encoding="utf-8"))
        assert manifest["config"]["ngram_max"] == 2
        tf = tmp_path / "tf.jsonl"
        run("extract", "--corpus", CORPUS, "--method", "tfidf", "--output", str(tf))
        manifest = json.loads((tmp_path / "tf.jsonl.manifest.json").read_text(encoding="utf-8"))
        assert manifest["config"]["ngram_max"] == 5

    def test_bad_k_is_usage_error(self, tmp_path):
        code = run("extract", "--corpus", CORPUS, "--method", "tfidf",
                   "--output", str(tmp_path / "o.jsonl"), "--k", "xyz")
        assert code == 1

    def test_unknown_method_usage_error(self, tmp_path):
        code = run("extract", "--corpus", CORPUS, "--method", "wrong", "--output", "x")
        assert code == 1

    def test_unknown_flag_usage_error(self):
        assert run("extract", "--corpus", CORPUS, "--no-such-flag") == 1

    def test_byte_identical_rerun(self, tmp_path):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        for out in (a, b):
            assert run(
                "extract", "--corpus", CORPUS, "--method", "cvalue",
                "--output", str(out), "--k", "all",
            ) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_k_all_unlimited(self, tmp_path):
        limited, unlimited = tmp_path / "l.jsonl", tmp_path / "u.jsonl"
        run("extract", "--corpus", CORPUS, "--method", "cvalue", "--output", str(limited), "--k", "3")
        run("extract", "--corpus", CORPUS, "--method", "cvalue", "--output", str(unlimited), "--k", "all")
        counts_l = [len(json.loads(l)["keywords"]) for l in limited.read_text().splitlines()]
        counts_u = [len(json.loads(l)["keywords"]) for l in unlimited.read_text().splitlines()]
        assert all(c <= 3 for c in counts_l)
        assert any(u > 3 for u in counts_u)

    def test_jobs_parallel_matches_serial(self, tmp_path):
        serial, parallel = tmp_path / "s.jsonl", tmp_path / "p.jsonl"
        run("extract", "--corpus", CORPUS, "--method", "tfidf", "--output", str(serial))
        run("extract", "--corpus", CORPUS, "--method", "tfidf", "--output", str(parallel), "--jobs", "2")
        assert serial.read_bytes() == parallel.read_bytes()


def _prepare_run(tmp_path):
    split_path = tmp_path / "split.json"
    preds_path = tmp_path / "preds.jsonl"
    run("split", "--corpus", CORPUS, "--output", str(split_path), "--seed", "3")
    run("extract", "--corpus", CORPUS, "--method", "firstphrases", "--output", str(preds_path))
    return split_path, preds_path


class TestEvaluateCommand:
    def test_writes_tsv_and_json(self, tmp_path):
        split_path, preds_path = _prepare_run(tmp_path)
        prefix = str(tmp_path / "report")
        code = run(
            "evaluate", "--corpus", CORPUS, "--split", str(split_path),
            "--predictions", str(preds_path), "--output-prefix", prefix,
        )
        assert code == 0
        tsv = Path(prefix + ".tsv").read_text(encoding="utf-8").splitlines()
        assert tsv[0].startswith("method\tscenario")
        assert len(tsv) == 4  # header + ranks 1,3,5
        assert Path(prefix + ".json").exists()

    def test_two_prediction_files_two_blocks(self, tmp_path):
        split_path, preds_path = _prepare_run(tmp_path)
        other = tmp_path / "other.jsonl"
        run("extract", "--corpus", CORPUS, "--method", "tfidf", "--output", str(other))
        prefix = str(tmp_path / "report")
        run(
            "evaluate", "--corpus", CORPUS, "--split", str(split_path),
            "--predictions", str(preds_path), "--predictions", str(other),
            "--output-prefix", prefix,
        )
        rows = Path(prefix + ".tsv").read_text(encoding="utf-8").splitlines()[1:]
        methods = {row.split("\t")[0] for row in rows}
        assert methods == {"firstphrases", "tfidf"}

    def test_extra_rank_flag(self, tmp_path):
        split_path, preds_path = _prepare_run(tmp_path)
        prefix = str(tmp_path / "report")
        run(
            "evaluate", "--corpus", CORPUS, "--split", str(split_path),
            "--predictions", str(preds_path), "--output-prefix", prefix,
            "--ranks", "1,3,5,10",
        )
        rows = Path(prefix + ".tsv").read_text(encoding="utf-8").splitlines()[1:]
        assert [r.split("\t")[3] for r in rows] == ["1", "3", "5", "10"]

    def test_report_regeneration_round_trip(self, tmp_path):
        split_path, preds_path = _prepare_run(tmp_path)
        prefix = str(tmp_path / "report")
        run(
            "evaluate", "--corpus", CORPUS, "--split", str(split_path),
            "--predictions", str(preds_path), "--output-prefix", prefix,
        )
        regenerated = tmp_path / "regen.tsv"
        assert run("report", "--counts", prefix + ".json", "--output", str(regenerated)) == 0
        assert regenerated.read_bytes() == Path(prefix + ".tsv").read_bytes()

    def test_byte_identical_rerun(self, tmp_path):
        split_path, preds_path = _prepare_run(tmp_path)
        pa, pb = str(tmp_path / "ra"), str(tmp_path / "rb")
        for prefix in (pa, pb):
            run(
                "evaluate", "--corpus", CORPUS, "--split", str(split_path),
                "--predictions", str(preds_path), "--output-prefix", prefix,
            )
        assert Path(pa + ".tsv").read_bytes() == Path(pb + ".tsv").read_bytes()
        assert Path(pa + ".json").read_bytes() == Path(pb + ".json").read_bytes()


class TestManifest:
    def test_manifest_reruns_identically(self, tmp_path):
        out = tmp_path / "preds.jsonl"
        assert run(
            "extract", "--corpus", CORPUS, "--method", "textrank", "--output", str(out),
        ) == 0
        first = out.read_bytes()
        argv = manifest_to_argv(str(out) + ".manifest.json")
        assert run(*argv) == 0
        assert out.read_bytes() == first


class TestIngestion:
    def test_underscore_labels_fold_to_spaces(self, tmp_path):
        # Classifier-style output with underscore-joined labels evaluates
        # against gold spelled with spaces.
        corpus = tmp_path / "c.jsonl"
        corpus.write_text(
            json.dumps({"id": "a", "title": "t", "abstract": "x",
                        "keywords": ["unia europejska"]}) + "\n",
            encoding="utf-8",
        )
        split_path = tmp_path / "split.json"
        split_path.write_text(
            json.dumps({"seed": 0, "ratios": {"train": 0.5, "test": 0.5},
                        "folds": {"train": [], "test": ["a"]}}),
            encoding="utf-8",
        )
        preds = tmp_path / "ext.jsonl"
        preds.write_text(
            json.dumps({"id": "a", "method": "classifier",
                        "keywords": [{"text": "unia_europejska", "score": 0.9}]}) + "\n",
            encoding="utf-8",
        )
        prefix = str(tmp_path / "rep")
        code = run(
            "evaluate", "--corpus", str(corpus), "--split", str(split_path),
            "--predictions", str(preds), "--output-prefix", prefix,
            "--ranks", "1", "--underscores-as-spaces",
        )
        assert code == 0
        row = Path(prefix + ".tsv").read_text(encoding="utf-8").splitlines()[1].split("\t")
        assert row[0] == "classifier"
        assert row[4] == "1.000"  # micro precision: the folded label matches

    def test_lemma_text_field_used_with_flag(self, tmp_path):
        corpus = tmp_path / "c.jsonl"
        corpus.write_text(
            json.dumps({"id": "a", "title": "Analizy obrazów", "abstract": "x",
                        "keywords": [], "lemma_text": "analiza obrazu"}) + "\n",
            encoding="utf-8",
        )
        out = tmp_path / "p.jsonl"
        assert run("extract", "--corpus", str(corpus), "--method", "firstphrases",
                   "--output", str(out), "--use-lemmas") == 0
        rec = json.loads(out.read_text(encoding="utf-8"))
        forms = {kw["text"] for kw in rec["keywords"]}
        assert "analiza obrazu" in forms
        assert "analizy obrazow" not in forms


class TestTransfer:
    def test_plain_text_inputs(self, tmp_path):
        story = tmp_path / "story.txt"
        story.write_text(
            "Nowy kanclerz Niemiec spotkał się z premierem. Rozmowy dotyczyły "
            "bezpieczeństwa energetycznego oraz kryzysu migracyjnego.",
            encoding="utf-8",
        )
        out = tmp_path / "preds.jsonl"
        code = run("transfer", "--method", "cvalue", "--output", str(out), str(story))
        assert code == 0
        rec = json.loads(out.read_text(encoding="utf-8"))
        assert rec["id"] == "story.txt"
        assert rec["keywords"]

    def test_empty_file_data_error(self, tmp_path):
        blank = tmp_path / "blank.txt"
        blank.write_text("  \n", encoding="utf-8")
        assert run("transfer", "--method", "cvalue", "--output", str(tmp_path / "o"), str(blank)) == 2
