"""Pure numpy implementations of the hot kernels.

Used when the compiled extension is unavailable or when
``KWEX_PURE_PYTHON=1`` is set.  Semantics (including tie-breaking by
lowest index) match ``_ckernels`` exactly.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def pagerank(
    indptr: np.ndarray,
    indices: np.ndarray,
    weights: np.ndarray,
    damping: float,
    tol: float,
    max_iter: int,
) -> tuple[np.ndarray, int]:
    """Power iteration on a weighted graph in CSR form.

    score(v) = (1-d)/n + d * sum_u score(u) * w(u,v) / deg_w(u), iterated
    from a uniform start until the max per-node delta drops below ``tol``
    or ``max_iter`` is reached.  Returns (scores, iterations_run).
    """
    n = len(indptr) - 1
    if n == 0:
        return np.zeros(0), 0
    row_ids = np.repeat(np.arange(n), np.diff(indptr))
    deg = np.zeros(n)
    np.add.at(deg, row_ids, weights)
    scores = np.full(n, 1.0 / n)
    base = (1.0 - damping) / n
    iterations = 0
    for _ in range(max_iter):
        iterations += 1
        contrib = np.divide(scores, deg, out=np.zeros(n), where=deg > 0)
        new = np.zeros(n)
        np.add.at(new, row_ids, weights * contrib[indices])
        new = base + damping * new
        delta = np.max(np.abs(new - scores))
        scores = new
        if delta < tol:
            break
    return scores, iterations


def mmr_select(
    doc_sims: np.ndarray,
    pairwise: np.ndarray,
    k: int,
    diversity: float,
) -> np.ndarray:
    """Greedy maximal-marginal-relevance selection.

    First pick is the argmax of ``doc_sims``; afterwards each pick
    maximizes (1-diversity)*doc_sim - diversity*max(sim to selected).
    Ties resolve to the lowest index.  Returns selection order.
    """
    n = len(doc_sims)
    if n == 0 or k <= 0:
        return np.zeros(0, dtype=np.int64)
    k = min(k, n)
    selected = np.empty(k, dtype=np.int64)
    taken = np.zeros(n, dtype=bool)

    first = int(np.argmax(doc_sims))
    selected[0] = first
    taken[first] = True
    max_to_selected = pairwise[:, first].copy()

    for step in range(1, k):
        scores = (1.0 - diversity) * doc_sims - diversity * max_to_selected
        scores[taken] = -np.inf
        pick = int(np.argmax(scores))
        selected[step] = pick
        taken[pick] = True
        np.maximum(max_to_selected, pairwise[:, pick], out=max_to_selected)
    return selected
