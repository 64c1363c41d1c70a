"""Embedding-similarity extractor: rank candidates by cosine similarity to
the document vector, diversified with MMR or MSS.

The embedding source is a static word-vector file (see
``WordVectorProvider``); document and phrase vectors are means of member
token vectors.  Exported transformer token vectors plug in via the same
format.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels
from .candidates import generate_ngram_candidates, tokenize
from .corpus import Document, normalize_keyword
from .predictions import RankedPrediction

__all__ = [
    "WordVectorProvider",
    "PrecomputedEmbeddings",
    "SimilarityMatrix",
    "embed_text",
    "mmr_select",
    "mss_select",
    "keybert_rank",
    "MSS_ENUMERATION_LIMIT",
]

logger = logging.getLogger(__name__)

MSS_DEFAULT_POOL = 20
MSS_ENUMERATION_LIMIT = 200_000


class WordVectorProvider:
    """Token -> dense vector lookup backed by a text vector file.

    File format: header line ``"<count> <dim>"`` followed by one
    ``"<token> <f1> ... <fdim>"`` line per token.  Tokens are normalized at
    load time (first occurrence wins).  Unknown tokens are reported as
    absent (``None``) unless ``zero_fallback`` is set.
    """

    def __init__(self, vectors: dict[str, np.ndarray], dimension: int, zero_fallback: bool = False):
        self.vectors = vectors
        self.dimension = dimension
        self.zero_fallback = zero_fallback

    @classmethod
    def load(cls, path: str | Path, zero_fallback: bool = False) -> "WordVectorProvider":
        vectors: dict[str, np.ndarray] = {}
        with open(path, encoding="utf-8") as fh:
            header = fh.readline().split()
            if len(header) != 2:
                raise ValueError(f"{path}: expected header '<count> <dim>'")
            count, dim = int(header[0]), int(header[1])
            for lineno, line in enumerate(fh, start=2):
                parts = line.rstrip("\n").split(" ")
                if len(parts) != dim + 1:
                    raise ValueError(
                        f"{path}: line {lineno}: expected {dim} components, got {len(parts) - 1}"
                    )
                token = normalize_keyword(parts[0])
                if token and token not in vectors:
                    vectors[token] = np.asarray([float(x) for x in parts[1:]], dtype=np.float64)
        if len(vectors) != count:
            logger.warning(
                "vector file %s: header says %d tokens, loaded %d distinct", path, count, len(vectors)
            )
        return cls(vectors=vectors, dimension=dim, zero_fallback=zero_fallback)

    @property
    def vocabulary(self) -> set[str]:
        return set(self.vectors)

    def get(self, token: str) -> np.ndarray | None:
        vec = self.vectors.get(token)
        if vec is None and self.zero_fallback:
            return np.zeros(self.dimension)
        return vec


class PrecomputedEmbeddings:
    """Exact document/candidate vectors exported by an external encoder.

    JSONL, one ``{"key": str, "vector": [numbers]}`` per line; keys are
    document ids or normalized candidate forms.  Looked up before falling
    back to word-vector means, which restores full fidelity to runs whose
    phrase vectors came from a transformer.
    """

    def __init__(self, vectors: dict[str, np.ndarray]):
        self.vectors = vectors

    @classmethod
    def load(cls, path: str | Path) -> "PrecomputedEmbeddings":
        import json

        vectors: dict[str, np.ndarray] = {}
        dim: int | None = None
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                    key = obj["key"]
                    vec = np.asarray([float(x) for x in obj["vector"]], dtype=np.float64)
                except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                    raise ValueError(f"{path}: line {lineno}: malformed embedding ({exc})") from exc
                if dim is None:
                    dim = len(vec)
                elif len(vec) != dim:
                    raise ValueError(f"{path}: line {lineno}: dimension {len(vec)} != {dim}")
                vectors[key] = vec
        return cls(vectors=vectors)

    def get(self, key: str) -> np.ndarray | None:
        return self.vectors.get(key)


def _mean_vector(tokens: list[str], provider: WordVectorProvider) -> np.ndarray | None:
    known = [provider.get(t) for t in tokens]
    known = [v for v in known if v is not None]
    if not known:
        return None
    return np.mean(known, axis=0)


def embed_text(text: str, provider: WordVectorProvider, stopwords: frozenset[str] = frozenset()) -> np.ndarray | None:
    """Mean vector of the known non-stopword tokens; None when none are known."""
    tokens = [t.text for t in tokenize(text, stopwords) if not t.is_stopword]
    return _mean_vector(tokens, provider)


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity; zero-norm vectors get similarity 0."""
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


@dataclass
class SimilarityMatrix:
    """Candidate-to-document and candidate-to-candidate cosine similarities.

    ``candidates`` is lexicographically sorted, which makes index-order
    tie-breaking equal lexicographic tie-breaking downstream.
    """

    candidates: list[str]
    doc_sims: np.ndarray
    pairwise: np.ndarray

    @classmethod
    def build(
        cls,
        doc_vector: np.ndarray,
        candidate_vectors: dict[str, np.ndarray],
    ) -> "SimilarityMatrix":
        candidates = sorted(candidate_vectors)
        zero_norm = [c for c in candidates if not np.linalg.norm(candidate_vectors[c])]
        if zero_norm or not np.linalg.norm(doc_vector):
            logger.warning(
                "zero-norm vectors get similarity 0: %s",
                ", ".join(zero_norm) or "document vector",
            )
        n = len(candidates)
        doc_sims = np.array([cosine(candidate_vectors[c], doc_vector) for c in candidates])
        pairwise = np.ones((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                s = cosine(candidate_vectors[candidates[i]], candidate_vectors[candidates[j]])
                pairwise[i, j] = pairwise[j, i] = s
        return cls(candidates=candidates, doc_sims=doc_sims, pairwise=pairwise)


def mmr_select(sims: SimilarityMatrix, k: int, diversity: float) -> list[str]:
    """Greedy MMR: argmax doc_sim first, then
    (1-diversity)*doc_sim(c) - diversity*max(pairwise(c, selected)).
    """
    if not 0.0 <= diversity <= 1.0:
        raise ValueError("diversity must be in [0, 1]")
    if k < 1:
        raise ValueError("k must be >= 1")
    if not sims.candidates:
        return []
    order = _kernels.mmr_select(sims.doc_sims, sims.pairwise, k, diversity)
    return [sims.candidates[i] for i in order]


def mss_select(sims: SimilarityMatrix, k: int, pool: int = MSS_DEFAULT_POOL) -> list[str]:
    """Max-sum-similarity: among the top-``pool`` candidates by doc_sim, find
    the size-k subset minimizing total pairwise similarity.

    Ties prefer higher total doc_sim, then lexicographic order.  Subset
    enumeration is guarded to C(pool, k) <= 200 000 with a greedy fallback.
    Output is ordered by doc_sim descending.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if pool < k:
        raise ValueError("pool must be >= k")
    n = len(sims.candidates)
    if n == 0:
        return []
    by_relevance = sorted(range(n), key=lambda i: (-sims.doc_sims[i], sims.candidates[i]))
    if n <= k:
        return [sims.candidates[i] for i in by_relevance]
    pool_idx = by_relevance[: min(pool, n)]

    if math.comb(len(pool_idx), k) <= MSS_ENUMERATION_LIMIT:
        best: tuple[float, float, tuple[str, ...]] | None = None
        best_subset: tuple[int, ...] = ()
        for subset in itertools.combinations(pool_idx, k):
            pair_sum = sum(
                sims.pairwise[a, b] for a, b in itertools.combinations(subset, 2)
            )
            rel_sum = sum(sims.doc_sims[i] for i in subset)
            key = (pair_sum, -rel_sum, tuple(sorted(sims.candidates[i] for i in subset)))
            if best is None or key < best:
                best = key
                best_subset = subset
        chosen = list(best_subset)
    else:
        logger.warning(
            "mss_select: C(%d, %d) exceeds enumeration limit; using greedy fallback",
            len(pool_idx),
            k,
        )
        chosen = [pool_idx[0]]
        remaining = [i for i in pool_idx if i != chosen[0]]
        while len(chosen) < k:
            pick = min(
                remaining,
                key=lambda i: (
                    sum(sims.pairwise[i, j] for j in chosen),
                    -sims.doc_sims[i],
                    sims.candidates[i],
                ),
            )
            chosen.append(pick)
            remaining.remove(pick)

    chosen.sort(key=lambda i: (-sims.doc_sims[i], sims.candidates[i]))
    return [sims.candidates[i] for i in chosen]


def keybert_rank(
    doc: Document,
    provider: WordVectorProvider,
    k: int | None,
    n_range: tuple[int, int] = (1, 2),
    mode: str = "mmr",
    diversity: float = 0.7,
    mss_pool: int = MSS_DEFAULT_POOL,
    stopwords: frozenset[str] = frozenset(),
    use_lemmas: bool = False,
    precomputed: PrecomputedEmbeddings | None = None,
) -> RankedPrediction:
    """Embed document and candidates, then select with MMR or MSS.

    Scores are the selected candidates' document similarities, in selection
    order (MMR order is the ranking; it is not score-sorted in general).
    Precomputed vectors, when given, take precedence over token means: the
    document is looked up by id, candidates by normalized form.
    """
    if mode not in ("mmr", "mss"):
        raise ValueError(f"unknown selection mode: {mode!r}")
    text = doc.extraction_text(use_lemmas)
    tokens = tokenize(text, stopwords)
    doc_vector = None
    if precomputed is not None:
        doc_vector = precomputed.get(doc.id)
    if doc_vector is None:
        doc_vector = _mean_vector([t.text for t in tokens if not t.is_stopword], provider)
    if doc_vector is None:
        logger.warning("keybert: no known tokens in document %s; empty prediction", doc.id)
        return RankedPrediction(doc.id, "keybert", [])
    candidate_vectors: dict[str, np.ndarray] = {}
    for cand in generate_ngram_candidates(tokens, n_range[0], n_range[1]):
        vec = precomputed.get(cand.normalized_form) if precomputed is not None else None
        if vec is None:
            vec = _mean_vector(list(cand.tokens), provider)
        if vec is not None:
            candidate_vectors[cand.normalized_form] = vec
    if not candidate_vectors:
        return RankedPrediction(doc.id, "keybert", [])
    sims = SimilarityMatrix.build(doc_vector, candidate_vectors)
    top = len(sims.candidates) if k is None else k
    if mode == "mmr":
        selected = mmr_select(sims, top, diversity)
    else:
        selected = mss_select(sims, min(top, len(sims.candidates)), max(mss_pool, min(top, len(sims.candidates))))
    sim_of = dict(zip(sims.candidates, sims.doc_sims))
    items = [(kw, float(sim_of[kw])) for kw in selected]
    return RankedPrediction(doc.id, "keybert", items)
