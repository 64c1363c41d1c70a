import json
import random

import pytest

from kwex.corpus import Document


def make_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
    return path


def synthetic_corpus(seed: int, n_docs: int, n_labels: int, max_labels_per_doc: int = 5):
    """Random multilabel corpus with a skewed label distribution.

    Returns (documents, records); records are the raw dicts so independent
    oracles can recount from the source data without going through the
    corpus module.
    """
    rng = random.Random(seed)
    labels = [f"label {i}" for i in range(n_labels)]
    weights = [1.0 / (i + 1) for i in range(n_labels)]
    records = []
    for d in range(n_docs):
        count = rng.randint(0, min(max_labels_per_doc, n_labels))
        chosen = []
        while len(chosen) < count:
            lab = rng.choices(labels, weights=weights)[0]
            if lab not in chosen:
                chosen.append(lab)
        records.append(
            {
                "id": f"doc{d:05d}",
                "title": f"title {d}",
                "abstract": f"abstract text {d}",
                "keywords": chosen,
            }
        )
    docs = [
        Document.create(
            id=r["id"], title=r["title"], abstract=r["abstract"], keywords=r["keywords"]
        )
        for r in records
    ]
    return docs, records


@pytest.fixture
def tmp_jsonl(tmp_path):
    def _write(records, name="corpus.jsonl"):
        return make_jsonl(tmp_path / name, records)

    return _write
