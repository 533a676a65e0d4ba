"""Brute-force reference constructions of each graph's defining condition.

These evaluate the definitions directly over full pairwise distance matrices
(O(n^2) space, O(n^3) time for the Gabriel check) and deliberately share no
code with the production constructors. Used by the validate CLI and the
acceptance suite. Keep inputs modest (n <= ~2000).
"""
from __future__ import annotations

import numpy as np


def pairwise_distances(points: np.ndarray) -> np.ndarray:
    pts = np.asarray(points, dtype=np.float64)
    return np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1))


def neighbor_sets(points: np.ndarray, k: int) -> list[list[int]]:
    """Exact k-neighbor lists under the (distance, index) tie rule, self excluded."""
    dists = pairwise_distances(points)
    n = dists.shape[0]
    k_eff = min(k, n - 1)
    out = []
    for i in range(n):
        order = np.lexsort((np.arange(n), dists[i]))
        order = order[order != i]
        out.append(order[:k_eff].tolist())
    return out


def knn_edges(points: np.ndarray, k: int, symmetrize: str = "none") -> set[tuple[int, int]]:
    """Directed i->j edges for each neighbor; union symmetrization optional."""
    sets = neighbor_sets(points, k)
    directed = {(i, j) for i, nbrs in enumerate(sets) for j in nbrs}
    if symmetrize == "none":
        return directed
    return {(min(u, v), max(u, v)) for u, v in directed}


def mnn_edges(points: np.ndarray, k: int) -> set[tuple[int, int]]:
    sets = [set(s) for s in neighbor_sets(points, k)]
    n = len(sets)
    return {
        (a, b)
        for a in range(n)
        for b in range(a + 1, n)
        if b in sets[a] and a in sets[b]
    }


def snn_edges(
    points: np.ndarray, k: int, theta: int
) -> tuple[set[tuple[int, int]], dict[tuple[int, int], int]]:
    """Edges where |N_k(a) & N_k(b)| >= theta, with the counts as weights."""
    sets = [set(s) for s in neighbor_sets(points, k)]
    n = len(sets)
    edges = set()
    weights = {}
    for a in range(n):
        for b in range(a + 1, n):
            shared = len(sets[a] & sets[b])
            if shared >= theta:
                edges.add((a, b))
                weights[(a, b)] = shared
    return edges, weights


def epsilon_edges(points: np.ndarray, epsilon: float) -> set[tuple[int, int]]:
    dists = pairwise_distances(points)
    n = dists.shape[0]
    return {(a, b) for a in range(n) for b in range(a + 1, n) if dists[a, b] < epsilon}


def gabriel_edges(points: np.ndarray, boundary: str = "open") -> set[tuple[int, int]]:
    """Literal evaluation of the diameter-sphere emptiness condition per pair.

    A pair survives iff every other point C has |C - mid|^2 >= (|A-B|/2)^2;
    boundary="closed" demands strict >.
    """
    pts = np.asarray(points, dtype=np.float64)
    n = pts.shape[0]
    edges = set()
    for a in range(n):
        for b in range(a + 1, n):
            mid = (pts[a] + pts[b]) / 2.0
            rhs = (np.sqrt(((pts[a] - pts[b]) ** 2).sum(-1)) / 2.0) ** 2
            lhs = ((pts - mid) ** 2).sum(-1)
            lhs[a] = np.inf
            lhs[b] = np.inf
            ok = (lhs > rhs).all() if boundary == "closed" else (lhs >= rhs).all()
            if ok:
                edges.add((a, b))
    return edges
