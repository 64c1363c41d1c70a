"""Native statistical extractors: TfIdf, TextRank, FirstPhrases and
C-value / NC-value terminology ranking.

All extractors are deterministic; score ties always break
lexicographically on the normalized keyword so rank cutoffs reproduce.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .candidates import (
    DEFAULT_MAX_PHRASE_LEN,
    Candidate,
    chunk_noun_phrases,
    generate_ngram_candidates,
    tokenize,
)
from .corpus import Document
from .predictions import RankedPrediction

__all__ = [
    "ExtractorConfig",
    "IdfTable",
    "TermTable",
    "build_idf_table",
    "tfidf_rank",
    "textrank_rank",
    "first_phrases_rank",
    "build_term_table",
    "cvalue_rank",
    "ncvalue_rank",
    "pagerank_scores",
]

DEFAULT_CONTEXT_WINDOW = 5


@dataclass(frozen=True)
class ExtractorConfig:
    """Shared candidate-generation settings."""

    stopwords: frozenset[str] = frozenset()
    n_min: int = 1
    n_max: int = DEFAULT_MAX_PHRASE_LEN
    use_lemmas: bool = False

    def doc_tokens(self, doc: Document):
        return tokenize(doc.extraction_text(self.use_lemmas), self.stopwords)

    def doc_candidates(self, doc: Document) -> list[Candidate]:
        return generate_ngram_candidates(self.doc_tokens(doc), self.n_min, self.n_max)


# ---------------------------------------------------------------------------
# TfIdf


@dataclass
class IdfTable:
    """Candidate document frequencies from the training fold."""

    n_docs: int
    df: dict[str, int]

    def idf(self, form: str) -> float:
        return math.log((self.n_docs + 1) / (self.df.get(form, 0) + 1)) + 1.0


def build_idf_table(docs: list[Document], config: ExtractorConfig) -> IdfTable:
    df: dict[str, int] = {}
    for doc in docs:
        for cand in config.doc_candidates(doc):
            df[cand.normalized_form] = df.get(cand.normalized_form, 0) + 1
    return IdfTable(n_docs=len(docs), df=df)


def tfidf_rank(
    doc: Document, idf_source: IdfTable, k: int | None, config: ExtractorConfig
) -> RankedPrediction:
    """Rank candidates by tf(c, doc) * (ln((N+1)/(df(c)+1)) + 1)."""
    scores = {
        cand.normalized_form: cand.frequency * idf_source.idf(cand.normalized_form)
        for cand in config.doc_candidates(doc)
    }
    return RankedPrediction.from_scores(doc.id, "tfidf", scores, k)


# ---------------------------------------------------------------------------
# TextRank


def pagerank_scores(
    adjacency: dict[str, dict[str, float]],
    damping: float,
    tol: float,
    max_iter: int,
) -> dict[str, float]:
    """Run the kernel power iteration over a weighted undirected graph.

    Nodes are sorted before building CSR arrays so results are independent
    of insertion order.
    """
    nodes = sorted(adjacency)
    index = {node: i for i, node in enumerate(nodes)}
    indptr = [0]
    indices: list[int] = []
    weights: list[float] = []
    for node in nodes:
        neighbors = adjacency[node]
        for other in sorted(neighbors):
            indices.append(index[other])
            weights.append(neighbors[other])
        indptr.append(len(indices))
    scores, _ = _kernels.pagerank(
        np.asarray(indptr, dtype=np.int64),
        np.asarray(indices, dtype=np.int64),
        np.asarray(weights, dtype=np.float64),
        damping,
        tol,
        max_iter,
    )
    return {node: float(scores[i]) for node, i in index.items()}


def build_cooccurrence_graph(tokens, window: int) -> dict[str, dict[str, float]]:
    """Undirected co-occurrence counts between non-stopword tokens whose
    distance in the (per-sentence) filtered sequence is below ``window``."""
    adjacency: dict[str, dict[str, float]] = {}
    by_sentence: dict[int, list[str]] = {}
    for tok in tokens:
        if not tok.is_stopword:
            by_sentence.setdefault(tok.sentence, []).append(tok.text)
            adjacency.setdefault(tok.text, {})
    for seq in by_sentence.values():
        for i, u in enumerate(seq):
            for j in range(i + 1, min(i + window, len(seq))):
                v = seq[j]
                if u == v:
                    continue
                adjacency[u][v] = adjacency[u].get(v, 0.0) + 1.0
                adjacency[v][u] = adjacency[v].get(u, 0.0) + 1.0
    return adjacency


def textrank_rank(
    doc: Document,
    k: int | None,
    config: ExtractorConfig,
    window: int = 4,
    damping: float = 0.85,
    tol: float = 1e-6,
    max_iter: int = 100,
) -> RankedPrediction:
    """PageRank over the token co-occurrence graph; phrases score as the
    sum of their member-token scores."""
    if window < 2:
        raise ValueError("window must be >= 2")
    if not 0.0 < damping < 1.0:
        raise ValueError("damping must be in (0, 1)")
    tokens = config.doc_tokens(doc)
    adjacency = build_cooccurrence_graph(tokens, window)
    if not adjacency:
        return RankedPrediction(doc.id, "textrank", [])
    node_scores = pagerank_scores(adjacency, damping, tol, max_iter)
    scores = {
        cand.normalized_form: sum(node_scores[t] for t in cand.tokens)
        for cand in generate_ngram_candidates(tokens, 1, config.n_max)
    }
    return RankedPrediction.from_scores(doc.id, "textrank", scores, k)


# ---------------------------------------------------------------------------
# FirstPhrases


def first_phrases_rank(
    doc: Document, k: int | None, config: ExtractorConfig
) -> RankedPrediction:
    """Earlier first occurrence ranks higher; score is -first_position."""
    scores = {
        cand.normalized_form: -float(cand.first_position)
        for cand in config.doc_candidates(doc)
    }
    return RankedPrediction.from_scores(doc.id, "firstphrases", scores, k)


# ---------------------------------------------------------------------------
# C-value / NC-value


@dataclass
class TermTable:
    """Corpus-wide candidate statistics for C/NC-value ranking.

    ``frequency`` counts every span occurrence; ``nested_in`` maps a
    candidate to the longer candidates properly containing it; context
    structures back the NC-value term.
    """

    frequency: dict[str, int]
    length: dict[str, int]
    nested_in: dict[str, frozenset[str]]
    context_cooc: dict[str, dict[str, int]] = field(default_factory=dict)
    context_candidates: dict[str, int] = field(default_factory=dict)
    total_candidates: int = 0

    def context_weight(self, word: str) -> float:
        if not self.total_candidates:
            return 0.0
        return self.context_candidates.get(word, 0) / self.total_candidates


def _proper_subspans(tokens: tuple[str, ...]):
    n = len(tokens)
    for length in range(1, n):
        for start in range(0, n - length + 1):
            yield tokens[start : start + length]


def build_term_table(
    docs: list[Document],
    config: ExtractorConfig,
    max_len: int = DEFAULT_MAX_PHRASE_LEN,
    context_window: int = DEFAULT_CONTEXT_WINDOW,
) -> TermTable:
    """Aggregate candidate frequencies, the nesting relation and context
    co-occurrence counts over the whole corpus."""
    if not docs:
        raise ValueError("build_term_table needs a non-empty corpus")
    frequency: dict[str, int] = {}
    tokens_of: dict[str, tuple[str, ...]] = {}
    context_cooc: dict[str, dict[str, int]] = {}
    context_sets: dict[str, set[str]] = {}

    for doc in docs:
        tokens = tokenize(doc.extraction_text(config.use_lemmas), config.stopwords)
        texts = [t.text for t in tokens]
        stop = [t.is_stopword for t in tokens]
        for cand in chunk_noun_phrases(tokens, max_len):
            form = cand.normalized_form
            frequency[form] = frequency.get(form, 0) + cand.frequency
            tokens_of.setdefault(form, cand.tokens)
            span_len = len(cand.tokens)
            cooc = context_cooc.setdefault(form, {})
            for start in cand.positions:
                lo = max(0, start - context_window)
                hi = min(len(texts), start + span_len + context_window)
                for pos in range(lo, hi):
                    if start <= pos < start + span_len or stop[pos]:
                        continue
                    word = texts[pos]
                    cooc[word] = cooc.get(word, 0) + 1
                    context_sets.setdefault(word, set()).add(form)

    nested_in: dict[str, set[str]] = {}
    for form, toks in tokens_of.items():
        for sub in _proper_subspans(toks):
            sub_form = " ".join(sub)
            if sub_form in frequency:
                nested_in.setdefault(sub_form, set()).add(form)

    return TermTable(
        frequency=frequency,
        length={form: len(toks) for form, toks in tokens_of.items()},
        nested_in={form: frozenset(s) for form, s in nested_in.items()},
        context_cooc=context_cooc,
        context_candidates={w: len(s) for w, s in context_sets.items()},
        total_candidates=len(frequency),
    )


def cvalue_score(form: str, table: TermTable) -> float:
    """C-value with a log2(length+1) factor so unigrams keep nonzero scores."""
    freq = table.frequency.get(form, 1)
    length = table.length.get(form, len(form.split(" ")))
    nesting = table.nested_in.get(form, frozenset())
    base = math.log2(length + 1)
    if not nesting:
        return base * freq
    correction = sum(table.frequency[b] for b in nesting) / len(nesting)
    return base * (freq - correction)


def cvalue_rank(
    doc: Document,
    table: TermTable,
    k: int | None,
    config: ExtractorConfig,
    max_len: int = DEFAULT_MAX_PHRASE_LEN,
) -> RankedPrediction:
    """Rank the document's own candidates by corpus-wide C-value.

    ``k=None`` returns every candidate (the recall-upper-bound mode).
    """
    tokens = tokenize(doc.extraction_text(config.use_lemmas), config.stopwords)
    scores = {
        cand.normalized_form: cvalue_score(cand.normalized_form, table)
        for cand in chunk_noun_phrases(tokens, max_len)
    }
    return RankedPrediction.from_scores(doc.id, "cvalue", scores, k)


def ncvalue_score(form: str, table: TermTable, alpha: float, beta: float) -> float:
    context_term = sum(
        count * table.context_weight(word)
        for word, count in table.context_cooc.get(form, {}).items()
    )
    return alpha * cvalue_score(form, table) + beta * context_term


def ncvalue_rank(
    doc: Document,
    table: TermTable,
    k: int | None,
    config: ExtractorConfig,
    alpha: float = 0.8,
    beta: float = 0.2,
    max_len: int = DEFAULT_MAX_PHRASE_LEN,
) -> RankedPrediction:
    """C-value blended with context-word evidence: alpha*C + beta*sum(f_a(b)*weight(b))."""
    if abs(alpha + beta - 1.0) > 1e-9:
        raise ValueError("alpha + beta must equal 1")
    tokens = tokenize(doc.extraction_text(config.use_lemmas), config.stopwords)
    scores = {
        cand.normalized_form: ncvalue_score(cand.normalized_form, table, alpha, beta)
        for cand in chunk_noun_phrases(tokens, max_len)
    }
    return RankedPrediction.from_scores(doc.id, "ncvalue", scores, k)
