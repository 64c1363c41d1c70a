"""Ranked-prediction evaluation: micro/macro precision, recall and F1 at
rank k, under three gold-vocabulary scenarios.

Scenarios:

* ``full_vocab``: gold keywords as annotated.
* ``min_freq_10``: gold labels below a corpus document-frequency floor are
  dropped (optionally from predictions too); documents left without gold
  are excluded from pooling and counted.
* ``train_vocab_restricted``: predicted keywords absent from the training
  fold's gold vocabulary are dropped before matching; gold is untouched.

Matching is exact string equality on normalized forms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

from .corpus import Document, _doc_frequency
from .predictions import RankedPrediction
from .split import SplitAssignment

__all__ = [
    "EvalError",
    "MetricTriple",
    "EvalReport",
    "match_at_k",
    "micro_metrics",
    "macro_metrics",
    "evaluate_run",
    "report_to_tsv_rows",
    "TSV_COLUMNS",
]

SCENARIOS = ("full_vocab", "min_freq_10", "train_vocab_restricted")
MACRO_MODES = ("gold_only", "gold_union_predicted", "samples")

TSV_COLUMNS = (
    "method",
    "scenario",
    "macro_mode",
    "rank",
    "micro_p",
    "micro_r",
    "micro_f1",
    "macro_p",
    "macro_r",
    "macro_f1",
    "docs",
    "empty_preds",
)


class EvalError(ValueError):
    """Raised for inconsistent evaluation inputs."""


def _f1(p: float, r: float) -> float:
    return 2.0 * p * r / (p + r) if p + r > 0 else 0.0


@dataclass(frozen=True)
class MetricTriple:
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_pr(cls, precision: float, recall: float) -> "MetricTriple":
        return cls(precision=precision, recall=recall, f1=_f1(precision, recall))

    def as_dict(self) -> dict[str, float]:
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1}


def match_at_k(
    gold: frozenset[str] | set[str], pred: RankedPrediction, k: int | None
) -> tuple[int, int, int]:
    """(tp, fp, fn) using the first min(k, len(pred)) predicted keywords.

    ``k=None`` uses the whole prediction.
    """
    top = set(pred.top(k))
    tp = len(top & gold)
    return tp, len(top) - tp, len(gold) - tp


def micro_metrics(per_doc_counts: list[tuple[int, int, int]]) -> MetricTriple:
    """Pool counts globally; zero denominators yield 0."""
    tp = sum(c[0] for c in per_doc_counts)
    fp = sum(c[1] for c in per_doc_counts)
    fn = sum(c[2] for c in per_doc_counts)
    p = tp / (tp + fp) if tp + fp else 0.0
    r = tp / (tp + fn) if tp + fn else 0.0
    return MetricTriple.from_pr(p, r)


def macro_metrics(
    gold_by_doc: dict[str, frozenset[str]],
    top_by_doc: dict[str, list[str]],
    universe: str = "gold_only",
) -> MetricTriple:
    """Unweighted mean of per-label metrics (or per-document for ``samples``).

    Per-label counts are pooled over documents first; the label universe is
    either the gold labels alone or their union with predicted labels.
    """
    if universe == "samples":
        ps, rs, f1s = [], [], []
        for doc_id, gold in gold_by_doc.items():
            top = set(top_by_doc.get(doc_id, []))
            tp = len(top & gold)
            p = tp / len(top) if top else 0.0
            r = tp / len(gold) if gold else 0.0
            ps.append(p)
            rs.append(r)
            f1s.append(_f1(p, r))
        n = len(ps)
        if not n:
            return MetricTriple(0.0, 0.0, 0.0)
        return MetricTriple(sum(ps) / n, sum(rs) / n, sum(f1s) / n)

    if universe not in ("gold_only", "gold_union_predicted"):
        raise ValueError(f"unknown macro universe: {universe!r}")
    labels: set[str] = set()
    for gold in gold_by_doc.values():
        labels |= gold
    if universe == "gold_union_predicted":
        for top in top_by_doc.values():
            labels.update(top)
    if not labels:
        return MetricTriple(0.0, 0.0, 0.0)

    tp: dict[str, int] = dict.fromkeys(labels, 0)
    fp: dict[str, int] = dict.fromkeys(labels, 0)
    fn: dict[str, int] = dict.fromkeys(labels, 0)
    for doc_id, gold in gold_by_doc.items():
        top = set(top_by_doc.get(doc_id, []))
        for label in top & gold:
            tp[label] += 1
        for label in top - gold:
            if label in fp:
                fp[label] += 1
        for label in gold - top:
            fn[label] += 1

    ps, rs, f1s = [], [], []
    for label in labels:
        denom_p = tp[label] + fp[label]
        denom_r = tp[label] + fn[label]
        p = tp[label] / denom_p if denom_p else 0.0
        r = tp[label] / denom_r if denom_r else 0.0
        ps.append(p)
        rs.append(r)
        f1s.append(_f1(p, r))
    n = len(labels)
    return MetricTriple(sum(ps) / n, sum(rs) / n, sum(f1s) / n)


@dataclass
class RankResult:
    micro: MetricTriple
    macro: MetricTriple
    micro_counts: tuple[int, int, int]


@dataclass
class EvalReport:
    """Per-method, per-scenario, per-rank metric triples plus counts."""

    method: str
    scenario: str
    macro_mode: str
    per_rank: dict[int | None, RankResult] = field(default_factory=dict)
    counts: dict[str, int] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        ranks = {}
        for k, res in self.per_rank.items():
            tp, fp, fn = res.micro_counts
            ranks[_rank_key(k)] = {
                "micro": {**res.micro.as_dict(), "tp": tp, "fp": fp, "fn": fn},
                "macro": res.macro.as_dict(),
            }
        return {
            "method": self.method,
            "scenario": self.scenario,
            "macro_mode": self.macro_mode,
            "counts": self.counts,
            "ranks": ranks,
        }


def _rank_key(k: int | None) -> str:
    return "all" if k is None else str(k)


def parse_rank(value: str) -> int | None:
    return None if value == "all" else int(value)


def evaluate_run(
    docs: list[Document],
    split: SplitAssignment,
    predictions: list[RankedPrediction],
    scenario: str = "full_vocab",
    ranks: tuple[int | None, ...] = (1, 3, 5),
    macro_mode: str = "gold_only",
    min_count: int = 10,
    filter_predictions: bool = False,
    test_fold: str = "test",
    train_fold: str = "train",
) -> EvalReport:
    """Evaluate one method's predictions on the test fold.

    Missing test-fold predictions count as empty; predictions for ids not
    in the corpus are an error.  Documents whose effective gold set is
    empty are excluded from pooling and reported in ``counts``.
    """
    if scenario not in SCENARIOS:
        raise ValueError(f"unknown scenario: {scenario!r}")
    if macro_mode not in MACRO_MODES:
        raise ValueError(f"unknown macro mode: {macro_mode!r}")
    doc_by_id = {d.id: d for d in docs}
    unknown = sorted({p.doc_id for p in predictions} - set(doc_by_id))
    if unknown:
        raise EvalError(f"predictions reference unknown document ids: {', '.join(unknown)}")
    if test_fold not in split.fold_ids:
        raise EvalError(f"split has no fold {test_fold!r}")

    preds_by_id: dict[str, RankedPrediction] = {}
    for pred in predictions:
        if pred.doc_id in preds_by_id:
            raise EvalError(f"multiple predictions for document {pred.doc_id!r}")
        preds_by_id[pred.doc_id] = pred
    method = next((p.method for p in predictions), "unknown")

    test_ids = [i for i in split.fold_ids[test_fold] if i in doc_by_id]

    allowed_labels: set[str] | None = None
    restrict_preds: set[str] | None = None
    if scenario == "min_freq_10":
        df = _doc_frequency(docs)
        allowed_labels = {kw for kw, c in df.items() if c >= min_count}
        if filter_predictions:
            restrict_preds = allowed_labels
    elif scenario == "train_vocab_restricted":
        train_vocab: set[str] = set()
        for doc_id in split.fold_ids.get(train_fold, []):
            if doc_id in doc_by_id:
                train_vocab |= doc_by_id[doc_id].gold_set
        restrict_preds = train_vocab

    gold_by_doc: dict[str, frozenset[str]] = {}
    pred_keywords: dict[str, list[str]] = {}
    excluded_empty_gold = 0
    empty_preds = 0
    for doc_id in test_ids:
        gold = doc_by_id[doc_id].gold_set
        if allowed_labels is not None:
            gold = gold & allowed_labels
        if not gold:
            excluded_empty_gold += 1
            continue
        gold_by_doc[doc_id] = frozenset(gold)
        pred = preds_by_id.get(doc_id)
        keywords = pred.keywords() if pred is not None else []
        if restrict_preds is not None:
            keywords = [kw for kw in keywords if kw in restrict_preds]
        if not keywords:
            empty_preds += 1
        pred_keywords[doc_id] = keywords

    universe: set[str] = set()
    for gold in gold_by_doc.values():
        universe |= gold

    report = EvalReport(
        method=method,
        scenario=scenario,
        macro_mode=macro_mode,
        counts={
            "docs": len(test_ids),
            "docs_counted": len(gold_by_doc),
            "excluded_empty_gold": excluded_empty_gold,
            "empty_predictions": empty_preds,
            "gold_label_universe": len(universe),
        },
    )
    for k in ranks:
        top_by_doc = {doc_id: kws[: len(kws) if k is None else k] for doc_id, kws in pred_keywords.items()}
        per_doc = []
        for doc_id, gold in gold_by_doc.items():
            top = set(top_by_doc[doc_id])
            tp = len(top & gold)
            per_doc.append((tp, len(top) - tp, len(gold) - tp))
        micro = micro_metrics(per_doc)
        macro = macro_metrics(gold_by_doc, top_by_doc, macro_mode)
        counts = (
            sum(c[0] for c in per_doc),
            sum(c[1] for c in per_doc),
            sum(c[2] for c in per_doc),
        )
        report.per_rank[k] = RankResult(micro=micro, macro=macro, micro_counts=counts)
    return report


def _round3(x: float) -> str:
    """Three decimals, half-up, matching the report presentation."""
    return str(Decimal(repr(x)).quantize(Decimal("0.001"), rounding=ROUND_HALF_UP))


def report_to_tsv_rows(report: EvalReport) -> list[list[str]]:
    rows = []
    # Canonical rank order (numeric, then "all") so TSV regeneration from
    # the JSON form is byte-identical regardless of dict ordering.
    for k in sorted(report.per_rank, key=lambda r: (r is None, r if r is not None else 0)):
        res = report.per_rank[k]
        rows.append(
            [
                report.method,
                report.scenario,
                report.macro_mode,
                _rank_key(k),
                _round3(res.micro.precision),
                _round3(res.micro.recall),
                _round3(res.micro.f1),
                _round3(res.macro.precision),
                _round3(res.macro.recall),
                _round3(res.macro.f1),
                str(report.counts["docs"]),
                str(report.counts["empty_predictions"]),
            ]
        )
    return rows


def write_reports_tsv(reports: list[EvalReport], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\t".join(TSV_COLUMNS) + "\n")
        for report in reports:
            for row in report_to_tsv_rows(report):
                fh.write("\t".join(row) + "\n")


def write_reports_json(reports: list[EvalReport], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump([r.to_json_dict() for r in reports], fh, ensure_ascii=False, indent=2, sort_keys=True)
        fh.write("\n")


def load_reports_json(path: str | Path) -> list[EvalReport]:
    """Rebuild reports from the stored JSON counts (for TSV regeneration)."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    reports = []
    for obj in raw:
        report = EvalReport(
            method=obj["method"],
            scenario=obj["scenario"],
            macro_mode=obj["macro_mode"],
            counts={k: int(v) for k, v in obj["counts"].items()},
        )
        for key, res in obj["ranks"].items():
            micro = res["micro"]
            macro = res["macro"]
            report.per_rank[parse_rank(key)] = RankResult(
                micro=MetricTriple(micro["precision"], micro["recall"], micro["f1"]),
                macro=MetricTriple(macro["precision"], macro["recall"], macro["f1"]),
                micro_counts=(micro["tp"], micro["fp"], micro["fn"]),
            )
        reports.append(report)
    return reports
