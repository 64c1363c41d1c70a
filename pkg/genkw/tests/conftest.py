import json

import pytest

DOCS = [
    {
        "id": f"d{i:02d}",
        "title": f"Praca o temacie t{i % 5}",
        "abstract": f"Dokument omawia temat t{i % 5} oraz obszar o{i % 3} w ujeciu praktycznym.",
        "keywords": [f"temat t{i % 5}", f"obszar o{i % 3}"],
    }
    for i in range(10)
]


@pytest.fixture
def fixture_corpus(tmp_path):
    path = tmp_path / "corpus.jsonl"
    with open(path, "w", encoding="utf-8") as fh:
        for doc in DOCS:
            fh.write(json.dumps(doc, ensure_ascii=False) + "\n")
    return path


@pytest.fixture
def fixture_split(tmp_path):
    path = tmp_path / "split.json"
    split = {
        "seed": 0,
        "ratios": {"train": 0.7, "test": 0.3},
        "folds": {
            "train": [f"d{i:02d}" for i in range(7)],
            "test": [f"d{i:02d}" for i in range(7, 10)],
        },
    }
    path.write_text(json.dumps(split), encoding="utf-8")
    return path
