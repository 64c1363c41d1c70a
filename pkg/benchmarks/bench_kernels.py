#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from kwex._kernels import _pykernels

try:
    from kwex._kernels import _ckernels
except ImportError:
    _ckernels = None


def random_graph(seed: int, n: int, avg_degree: int):
    rng = np.random.default_rng(seed)
    rows = [[] for _ in range(n)]
    for _ in range(n * avg_degree // 2):
        u, v = rng.integers(0, n, size=2)
        if u == v:
            continue
        rows[u].append((int(v), 1.0))
        rows[v].append((int(u), 1.0))
    indptr, indices, weights = [0], [], []
    for r in rows:
        for v, w in sorted(r):
            indices.append(v)
            weights.append(w)
        indptr.append(len(indices))
    return (
        np.asarray(indptr, dtype=np.int64),
        np.asarray(indices, dtype=np.int64),
        np.asarray(weights, dtype=np.float64),
    )


def random_sims(seed: int, n: int, dim: int = 16):
    rng = np.random.default_rng(seed)
    vecs = rng.normal(size=(n, dim))
    vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    pairwise = np.ascontiguousarray(vecs @ vecs.T)
    np.fill_diagonal(pairwise, 1.0)
    doc_sims = np.ascontiguousarray(vecs @ rng.normal(size=dim))
    return doc_sims, pairwise


def timeit(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    if _ckernels is None:
        print("compiled extension not available; nothing to compare")
        return

    rows = []

    graph = random_graph(0, 2000, 16)
    for name, impl in (("cython", _ckernels), ("python", _pykernels)):
        t = timeit(lambda: impl.pagerank(*graph, 0.85, 1e-10, 100), args.repeat)
        rows.append((f"pagerank n=2000 deg=16", name, t))

    doc_sims, pairwise = random_sims(1, 1500)
    for name, impl in (("cython", _ckernels), ("python", _pykernels)):
        t = timeit(lambda: impl.mmr_select(doc_sims, pairwise, 50, 0.7), args.repeat)
        rows.append((f"mmr n=1500 k=50", name, t))

    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  backend  best_seconds")
    baselines = {}
    for kernel, backend, t in rows:
        baselines.setdefault(kernel, {})[backend] = t
        print(f"{kernel:<{width}}  {backend:<7}  {t:.6f}")
    print()
    for kernel, backs in baselines.items():
        if "cython" in backs and "python" in backs:
            print(f"{kernel}: speedup x{backs['python'] / backs['cython']:.1f}")


if __name__ == "__main__":
    main()
