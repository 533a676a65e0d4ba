"""Pure numpy implementations of the hot construction kernels.

Used when the compiled extension is unavailable (or forced off via
GRAPHFORGE_FORCE_NUMPY). Slower than the compiled path on large inputs but
produces identical results.

A point C lies strictly inside the sphere with diameter AB exactly when
(C - A) . (C - B) < 0, so every Gabriel blocking test below is a dot-product
sign check. "closed" mode also blocks boundary points (dot == 0).
"""
from __future__ import annotations

import numpy as np

BACKEND_NAME = "numpy"

# width of the vectorized pre-pruning pass in gabriel_exact_edges
_PRUNE_WIDTH = 32


def gabriel_exact_edges(points: np.ndarray, closed: bool) -> np.ndarray:
    """Edge list (u, v) of the exact Gabriel graph over distinct points.

    Per node, candidates are scanned in ascending distance order; a pair is
    dropped as soon as one blocker is found. Blockers of pair (a, b) are
    always strictly closer to a than b is, so pruning against the first few
    neighbors removes almost every non-edge before the full check.
    """
    pts = np.ascontiguousarray(points, dtype=np.float64)
    n = pts.shape[0]
    edges_u: list[np.ndarray] = []
    edges_v: list[np.ndarray] = []
    for a in range(n):
        d2 = ((pts - pts[a]) ** 2).sum(-1)
        order = np.argsort(d2, kind="stable")
        order = order[order != a]
        cand = pts[order]
        anchor = pts[a]

        blocked = np.zeros(n - 1, dtype=bool)
        width = min(_PRUNE_WIDTH, n - 2)
        for j in range(width):
            dots = ((cand[j] - anchor) * (cand[j] - cand)).sum(-1)
            hit = dots <= 0 if closed else dots < 0
            hit[: j + 1] = False
            blocked |= hit

        survivors = np.flatnonzero(~blocked & (order > a))
        kept = []
        for m in survivors:
            b = order[m]
            dots = ((pts - anchor) * (pts - pts[b])).sum(-1)
            dots[a] = np.inf
            dots[b] = np.inf
            hit = (dots <= 0) if closed else (dots < 0)
            if not hit.any():
                kept.append(b)
        if kept:
            edges_u.append(np.full(len(kept), a, dtype=np.int64))
            edges_v.append(np.asarray(kept, dtype=np.int64))
    if not edges_u:
        return np.empty((0, 2), dtype=np.int64)
    return np.stack([np.concatenate(edges_u), np.concatenate(edges_v)], axis=1)


def gabriel_blocked_mask(
    points: np.ndarray,
    pairs: np.ndarray,
    indptr: np.ndarray,
    candidates: np.ndarray,
    closed: bool,
) -> np.ndarray:
    """True for each pair blocked by one of its listed candidate points.

    candidates holds, CSR-style via indptr, the potential blockers of each
    pair (typically a ball query around the pair midpoint); entries equal to
    either endpoint are ignored.
    """
    pts = np.ascontiguousarray(points, dtype=np.float64)
    m = pairs.shape[0]
    if candidates.size == 0:
        return np.zeros(m, dtype=bool)
    owner = np.repeat(np.arange(m, dtype=np.int64), np.diff(indptr))
    c = pts[candidates]
    a = pts[pairs[owner, 0]]
    b = pts[pairs[owner, 1]]
    dots = ((c - a) * (c - b)).sum(-1)
    hit = (dots <= 0) if closed else (dots < 0)
    hit &= (candidates != pairs[owner, 0]) & (candidates != pairs[owner, 1])
    return np.bincount(owner[hit], minlength=m) > 0


def snn_cooccurrence_codes(
    owners: np.ndarray, indptr: np.ndarray, n_nodes: int
) -> np.ndarray:
    """Pair codes u*n+v (u < v) for every co-occurrence of two owners in a group.

    owners lists, group by group via indptr, the nodes that share a given
    neighbor; every unordered owner pair inside one group contributes one
    code, so the multiplicity of a code across all groups equals the number
    of shared neighbors of that pair.
    """
    codes: list[np.ndarray] = []
    n = np.int64(n_nodes)
    for g in range(len(indptr) - 1):
        members = np.sort(owners[indptr[g] : indptr[g + 1]])
        if members.size < 2:
            continue
        iu, iv = np.triu_indices(members.size, k=1)
        codes.append(members[iu] * n + members[iv])
    if not codes:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(codes)
