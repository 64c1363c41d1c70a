"""Deterministic multilabel iterative-stratified train/dev/test splitting.

The assignment loop repeatedly takes the label with the fewest remaining
unassigned documents and deals those documents to the fold that still
needs that label the most.  Ties go to the fold with the greatest overall
remaining demand, then to a seeded pseudo-random choice, which makes the
whole split a pure function of (documents, ratios, seed).
"""

from __future__ import annotations

import heapq
import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Document

__all__ = ["SplitAssignment", "iterative_stratified_split", "load_split", "save_split"]

_RATIO_TOL = 1e-9


@dataclass
class SplitAssignment:
    """Partition of document ids into folds, with per-label balance data."""

    fold_ids: dict[str, list[str]]
    ratios: dict[str, float]
    seed: int
    balance_report: dict[str, dict[str, float]] = field(default_factory=dict, repr=False)

    def fold_of(self) -> dict[str, str]:
        """Map document id -> fold name."""
        return {doc_id: fold for fold, ids in self.fold_ids.items() for doc_id in ids}

    def to_json_dict(self) -> dict:
        return {
            "seed": self.seed,
            "ratios": self.ratios,
            "folds": {fold: list(ids) for fold, ids in self.fold_ids.items()},
        }


def save_split(assignment: SplitAssignment, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(assignment.to_json_dict(), fh, ensure_ascii=False, sort_keys=True)
        fh.write("\n")


def load_split(path: str | Path) -> SplitAssignment:
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    return SplitAssignment(
        fold_ids={fold: list(ids) for fold, ids in obj["folds"].items()},
        ratios={fold: float(r) for fold, r in obj["ratios"].items()},
        seed=int(obj["seed"]),
    )


def _balance_report(
    docs: list[Document], fold_of: dict[str, str], folds: list[str]
) -> dict[str, dict[str, float]]:
    counts: dict[str, dict[str, int]] = {}
    for doc in docs:
        fold = fold_of[doc.id]
        for label in doc.gold_set:
            counts.setdefault(label, dict.fromkeys(folds, 0))[fold] += 1
    report: dict[str, dict[str, float]] = {}
    for label, per_fold in counts.items():
        total = sum(per_fold.values())
        report[label] = {fold: per_fold[fold] / total for fold in folds}
    return report


def iterative_stratified_split(
    docs: list[Document],
    ratios: dict[str, float],
    seed: int,
) -> SplitAssignment:
    """Split documents into folds, balancing every label's distribution.

    Documents without labels are distributed last, by overall remaining
    fold demand.  Output is deterministic for fixed inputs and seed.
    """
    if not docs:
        raise ValueError("cannot split an empty corpus")
    if abs(sum(ratios.values()) - 1.0) > _RATIO_TOL:
        raise ValueError(f"fold ratios must sum to 1, got {sum(ratios.values())!r}")
    if any(r <= 0 for r in ratios.values()):
        raise ValueError("every fold ratio must be > 0")
    ids = [d.id for d in docs]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate document ids")

    rng = random.Random(seed)
    folds = list(ratios)
    n = len(docs)

    # Remaining demand: overall documents per fold, and per (fold, label).
    fold_demand = {f: ratios[f] * n for f in folds}
    label_docs: dict[str, list[Document]] = {}
    for doc in docs:
        for label in doc.gold_set:
            label_docs.setdefault(label, []).append(doc)
    label_demand = {
        (f, label): ratios[f] * len(ds) for f in folds for label, ds in label_docs.items()
    }
    remaining_per_label = {label: len(ds) for label, ds in label_docs.items()}

    assigned: dict[str, str] = {}

    def pick_fold(doc: Document, label: str | None) -> str:
        if label is not None:
            best = max(label_demand[(f, label)] for f in folds)
            tied = [f for f in folds if label_demand[(f, label)] == best]
        else:
            tied = list(folds)
        if len(tied) > 1:
            best_overall = max(fold_demand[f] for f in tied)
            tied = [f for f in tied if fold_demand[f] == best_overall]
        fold = tied[0] if len(tied) == 1 else rng.choice(tied)
        assigned[doc.id] = fold
        fold_demand[fold] -= 1
        for lab in doc.gold_set:
            label_demand[(fold, lab)] -= 1
            remaining_per_label[lab] -= 1
        return fold

    # Rarest label first; a lazy heap avoids rescanning the label set.
    # Remaining counts only decrease, so stale entries are re-pushed with
    # their current value.  (count, label) ordering makes ties lexicographic.
    heap = sorted((c, lab) for lab, c in remaining_per_label.items())
    done: set[str] = set()
    while heap:
        count, label = heapq.heappop(heap)
        if label in done:
            continue
        actual = remaining_per_label[label]
        if actual <= 0:
            done.add(label)
            continue
        if actual != count:
            heapq.heappush(heap, (actual, label))
            continue
        for doc in label_docs[label]:
            if doc.id not in assigned:
                pick_fold(doc, label)
        done.add(label)

    for doc in docs:
        if doc.id not in assigned:
            pick_fold(doc, None)

    fold_ids: dict[str, list[str]] = {f: [] for f in folds}
    for doc in docs:
        fold_ids[assigned[doc.id]].append(doc.id)

    return SplitAssignment(
        fold_ids=fold_ids,
        ratios=dict(ratios),
        seed=seed,
        balance_report=_balance_report(docs, assigned, folds),
    )
