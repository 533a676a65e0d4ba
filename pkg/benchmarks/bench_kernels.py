#!/usr/bin/env python3
"""Benchmark the compiled kernels against their pure numpy twins.

Usage: python benchmarks/bench_kernels.py [--sizes 500,2000,5000] [--dim 6]

Times gabriel exact construction, candidate-pair filtering and SNN
co-occurrence counting on random uniform points, and verifies that both
backends return identical results while it is at it.
"""
from __future__ import annotations

import argparse
import itertools
import time

import numpy as np
from scipy.spatial import cKDTree

from graphforge.kernels import _numpy_impl, compiled_backend


def _time(fn, repeats=1):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def _canon(edges):
    return sorted(map(tuple, np.asarray(edges).tolist()))


def bench_gabriel_exact(pts, impls):
    return {name: _time(lambda m=mod: m.gabriel_exact_edges(pts, False)) for name, mod in impls}


def bench_blocked_mask(pts, impls, cand_k=20):
    tree = cKDTree(pts)
    n = pts.shape[0]
    _, nbr = tree.query(pts, k=cand_k + 1)
    src = np.repeat(np.arange(n, dtype=np.int64), cand_k)
    dst = nbr[:, 1:].reshape(-1).astype(np.int64)
    codes = np.unique(np.minimum(src, dst) * n + np.maximum(src, dst))
    pairs = np.ascontiguousarray(np.stack([codes // n, codes % n], axis=1))
    mids = 0.5 * (pts[pairs[:, 0]] + pts[pairs[:, 1]])
    radii = 0.5 * np.sqrt(((pts[pairs[:, 0]] - pts[pairs[:, 1]]) ** 2).sum(-1)) * (1 + 1e-9)
    balls = tree.query_ball_point(mids, radii)
    lens = np.fromiter(map(len, balls), count=len(balls), dtype=np.int64)
    indptr = np.concatenate([[0], np.cumsum(lens)]).astype(np.int64)
    cands = np.fromiter(itertools.chain.from_iterable(balls), count=int(lens.sum()), dtype=np.int64)
    return {
        name: _time(lambda m=mod: m.gabriel_blocked_mask(pts, pairs, indptr, cands, False))
        for name, mod in impls
    }


def bench_snn_codes(pts, impls, k=3):
    tree = cKDTree(pts)
    n = pts.shape[0]
    _, nbr = tree.query(pts, k=k + 1)
    members = nbr[:, 1:].reshape(-1).astype(np.int64)
    owners = np.repeat(np.arange(n, dtype=np.int64), k)
    order = np.argsort(members, kind="stable")
    owners = np.ascontiguousarray(owners[order])
    boundaries = np.flatnonzero(np.diff(members[order])) + 1
    indptr = np.concatenate([[0], boundaries, [owners.size]]).astype(np.int64)
    return {
        name: _time(lambda m=mod: m.snn_cooccurrence_codes(owners, indptr, n))
        for name, mod in impls
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="500,2000,5000")
    parser.add_argument("--dim", type=int, default=6)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    compiled = compiled_backend()
    impls = [("numpy", _numpy_impl)]
    if compiled is not None:
        impls.append(("cython", compiled))
    else:
        print("compiled extension not available; timing the numpy backend only")

    rng = np.random.default_rng(args.seed)
    benches = [
        ("gabriel-exact", bench_gabriel_exact),
        ("gabriel-pair-filter", bench_blocked_mask),
        ("snn-counting", bench_snn_codes),
    ]

    print(f"{'kernel':<22}{'n':>8}  " + "".join(f"{name:>12}" for name, _ in impls) + f"{'speedup':>10}")
    for n in [int(s) for s in args.sizes.split(",")]:
        pts = np.ascontiguousarray(rng.random((n, args.dim)))
        for bench_name, bench in benches:
            results = bench(pts, impls)
            times = [results[name][0] for name, _ in impls]
            outputs = [results[name][1] for name, _ in impls]
            if len(outputs) == 2:
                a, b = outputs
                same = (
                    _canon(a) == _canon(b)
                    if bench_name == "gabriel-exact"
                    else np.array_equal(np.sort(np.asarray(a).ravel()), np.sort(np.asarray(b).ravel()))
                )
                if not same:
                    raise SystemExit(f"backend mismatch in {bench_name} at n={n}")
            row = f"{bench_name:<22}{n:>8}  " + "".join(f"{t:>11.4f}s" for t in times)
            if len(times) == 2 and times[1] > 0:
                row += f"{times[0] / times[1]:>9.1f}x"
            print(row)


if __name__ == "__main__":
    main()
