"""Training-pair construction and model-output parsing.

Inputs are the toolkit's corpus JSONL and split JSON files; outputs are
seq2seq (input, target) pairs where the input is the title concatenated
with the abstract and the target is the comma-separated gold keyword
list in corpus order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .textnorm import normalize_keyword

_TERMINAL_PUNCT = ".!?;:"


@dataclass
class TrainingPair:
    doc_id: str
    source: str
    target: str


@dataclass
class CorpusRecord:
    doc_id: str
    text: str
    keywords: list[str]


def _concat_title_abstract(title: str, abstract: str) -> str:
    if not title:
        return abstract
    if not abstract:
        return title
    sep = " " if title.rstrip()[-1] in _TERMINAL_PUNCT else ". "
    return title.rstrip() + sep + abstract


def read_corpus(path: str | Path) -> list[CorpusRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                records.append(
                    CorpusRecord(
                        doc_id=obj["id"],
                        text=_concat_title_abstract(obj.get("title", ""), obj.get("abstract", "")),
                        keywords=list(obj.get("keywords", [])),
                    )
                )
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ValueError(f"{path}: line {lineno}: malformed record ({exc})") from exc
    return records


def read_split_fold(path: str | Path, fold: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    try:
        return list(obj["folds"][fold])
    except KeyError as exc:
        raise ValueError(f"{path}: no fold {fold!r}") from exc


def build_training_pairs(
    corpus_path: str | Path, split_path: str | Path, fold: str = "train"
) -> tuple[list[TrainingPair], int]:
    """Pairs for one fold; returns (pairs, skipped_empty_keyword_docs)."""
    wanted = set(read_split_fold(split_path, fold))
    pairs, skipped = [], 0
    for rec in read_corpus(corpus_path):
        if rec.doc_id not in wanted:
            continue
        if not rec.keywords:
            skipped += 1
            continue
        pairs.append(
            TrainingPair(doc_id=rec.doc_id, source=rec.text, target=", ".join(rec.keywords))
        )
    return pairs, skipped


def parse_model_output(text: str) -> list[str]:
    """Comma-separated model output -> ordered keyword list.

    Whitespace is trimmed, empties dropped, and duplicates removed on the
    normalized form (first surface wins) while preserving order.
    """
    out: list[str] = []
    seen: set[str] = set()
    for piece in text.split(","):
        surface = piece.strip()
        if not surface:
            continue
        key = normalize_keyword(surface)
        if key and key not in seen:
            seen.add(key)
            out.append(surface)
    return out


def write_pairs_jsonl(pairs: list[TrainingPair], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for pair in pairs:
            fh.write(
                json.dumps(
                    {"id": pair.doc_id, "source": pair.source, "target": pair.target},
                    ensure_ascii=False,
                )
                + "\n"
            )


def read_pairs_jsonl(path: str | Path) -> list[TrainingPair]:
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                obj = json.loads(line)
                pairs.append(TrainingPair(obj["id"], obj["source"], obj["target"]))
    return pairs


def write_predictions_jsonl(rows: list[tuple[str, list[str]]], path: str | Path, method: str = "genkw") -> None:
    """Emit the toolkit's predictions JSONL with 1/rank surrogate scores."""
    with open(path, "w", encoding="utf-8") as fh:
        for doc_id, keywords in rows:
            obj = {
                "id": doc_id,
                "method": method,
                "keywords": [
                    {"text": kw, "score": 1.0 / (rank + 1)} for rank, kw in enumerate(keywords)
                ],
            }
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")
