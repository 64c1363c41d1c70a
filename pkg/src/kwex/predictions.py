"""Ranked keyword predictions and their JSONL wire format.

One line per document:

    {"id": str, "method": str, "keywords": [{"text": str, "score": number}]}

Items are stored in rank order.  Score-ranked extractors sort descending
with lexicographic tie-breaks; selection-order methods (MMR, generative
models) emit their own order and the scores are informational.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

__all__ = ["RankedPrediction", "read_predictions_jsonl", "write_predictions_jsonl"]


@dataclass
class RankedPrediction:
    """Score-ordered keyword list for one document from one method."""

    doc_id: str
    method: str
    items: list[tuple[str, float]] = field(default_factory=list)

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for kw, score in self.items:
            if kw in seen:
                raise ValueError(f"duplicate keyword {kw!r} in prediction for {self.doc_id!r}")
            seen.add(kw)
            if not math.isfinite(score):
                raise ValueError(f"non-finite score for {kw!r} in {self.doc_id!r}")

    @classmethod
    def from_scores(
        cls, doc_id: str, method: str, scores: dict[str, float], k: int | None
    ) -> "RankedPrediction":
        """Rank by score descending, ties lexicographic, cut to top-k.

        ``k=None`` keeps everything (unlimited mode).
        """
        ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
        if k is not None:
            ranked = ranked[:k]
        return cls(doc_id=doc_id, method=method, items=ranked)

    def keywords(self) -> list[str]:
        return [kw for kw, _ in self.items]

    def top(self, k: int | None) -> list[str]:
        if k is None:
            return self.keywords()
        return [kw for kw, _ in self.items[:k]]


def write_predictions_jsonl(predictions: list[RankedPrediction], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for pred in predictions:
            obj = {
                "id": pred.doc_id,
                "method": pred.method,
                "keywords": [{"text": kw, "score": score} for kw, score in pred.items],
            }
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


def read_predictions_jsonl(
    path: str | Path, normalize: bool = True, underscores_as_spaces: bool = False
) -> list[RankedPrediction]:
    """Read predictions, optionally re-normalizing ingested keywords.

    External runs (classifier or generative output) may carry raw surface
    forms; normalization maps them onto the toolkit's canonical forms, with
    order-preserving dedup keeping the first (higher-ranked) occurrence.
    """
    from .corpus import normalize_keyword

    preds: list[RankedPrediction] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                doc_id = obj["id"]
                method = obj.get("method", "unknown")
                raw_items = [(it["text"], float(it.get("score", 0.0))) for it in obj["keywords"]]
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"{path}: line {lineno}: malformed prediction ({exc})") from exc
            items: list[tuple[str, float]] = []
            seen: set[str] = set()
            for kw, score in raw_items:
                if normalize:
                    kw = normalize_keyword(kw, underscores_as_spaces)
                if kw and kw not in seen:
                    seen.add(kw)
                    items.append((kw, score))
            preds.append(RankedPrediction(doc_id=doc_id, method=method, items=items))
    return preds
