# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels (PageRank power iteration and
greedy MMR selection).  Semantics match ``_pykernels`` exactly, including
lowest-index tie-breaking; accumulations run in the same order so results
agree bit-for-bit in practice."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"


def pagerank(
    cnp.int64_t[::1] indptr,
    cnp.int64_t[::1] indices,
    cnp.float64_t[::1] weights,
    double damping,
    double tol,
    int max_iter,
):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    if n == 0:
        return np.zeros(0), 0

    scores_arr = np.full(n, 1.0 / n)
    new_arr = np.zeros(n)
    deg_arr = np.zeros(n)
    contrib_arr = np.zeros(n)
    cdef cnp.float64_t[::1] scores = scores_arr
    cdef cnp.float64_t[::1] new = new_arr
    cdef cnp.float64_t[::1] deg = deg_arr
    cdef cnp.float64_t[::1] contrib = contrib_arr

    cdef Py_ssize_t v, e
    cdef double base = (1.0 - damping) / n
    cdef double acc, delta, diff
    cdef int iterations = 0, it

    for v in range(n):
        acc = 0.0
        for e in range(indptr[v], indptr[v + 1]):
            acc += weights[e]
        deg[v] = acc

    for it in range(max_iter):
        iterations += 1
        for v in range(n):
            contrib[v] = scores[v] / deg[v] if deg[v] > 0 else 0.0
        delta = 0.0
        for v in range(n):
            acc = 0.0
            for e in range(indptr[v], indptr[v + 1]):
                acc += weights[e] * contrib[indices[e]]
            new[v] = base + damping * acc
            diff = new[v] - scores[v]
            if diff < 0:
                diff = -diff
            if diff > delta:
                delta = diff
        scores_arr, new_arr = new_arr, scores_arr
        scores = scores_arr
        new = new_arr
        if delta < tol:
            break
    return scores_arr, iterations


def mmr_select(
    cnp.float64_t[::1] doc_sims,
    cnp.float64_t[:, ::1] pairwise,
    int k,
    double diversity,
):
    cdef Py_ssize_t n = doc_sims.shape[0]
    if n == 0 or k <= 0:
        return np.zeros(0, dtype=np.int64)
    if k > n:
        k = <int> n

    selected_arr = np.empty(k, dtype=np.int64)
    cdef cnp.int64_t[::1] selected = selected_arr
    taken_arr = np.zeros(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] taken = taken_arr
    max_sel_arr = np.empty(n)
    cdef cnp.float64_t[::1] max_sel = max_sel_arr

    cdef Py_ssize_t i, pick, step
    cdef double best, score

    pick = 0
    best = doc_sims[0]
    for i in range(1, n):
        if doc_sims[i] > best:
            best = doc_sims[i]
            pick = i
    selected[0] = pick
    taken[pick] = 1
    for i in range(n):
        max_sel[i] = pairwise[i, pick]

    for step in range(1, k):
        pick = -1
        best = 0.0
        for i in range(n):
            if taken[i]:
                continue
            score = (1.0 - diversity) * doc_sims[i] - diversity * max_sel[i]
            if pick < 0 or score > best:
                best = score
                pick = i
        selected[step] = pick
        taken[pick] = 1
        for i in range(n):
            if pairwise[i, pick] > max_sel[i]:
                max_sel[i] = pairwise[i, pick]
    return selected_arr
