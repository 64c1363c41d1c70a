"""kwex: keyword extraction and ranked-evaluation toolkit for short texts.

Native extractors (TfIdf, TextRank, FirstPhrases, C/NC-value, embedding
similarity with MMR/MSS), deterministic multilabel stratified splitting,
and micro/macro precision/recall/F1 evaluation at rank k over ranked
predictions, own or ingested.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .corpus import (
    Document,
    KeywordForm,
    VocabStats,
    compute_vocab_stats,
    filter_by_min_label_freq,
    normalize_keyword,
    parse_corpus,
)
from .evaluation import EvalReport, MetricTriple, evaluate_run
from .predictions import RankedPrediction, read_predictions_jsonl, write_predictions_jsonl
from .split import SplitAssignment, iterative_stratified_split

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "Document",
    "KeywordForm",
    "VocabStats",
    "RankedPrediction",
    "SplitAssignment",
    "MetricTriple",
    "EvalReport",
    "normalize_keyword",
    "parse_corpus",
    "compute_vocab_stats",
    "filter_by_min_label_freq",
    "iterative_stratified_split",
    "evaluate_run",
    "read_predictions_jsonl",
    "write_predictions_jsonl",
    "__version__",
]
