"""Exact k-nearest-neighbor and radius queries over a PointSet.

Queries are answered from a k-d tree (scipy cKDTree) over an immutable
snapshot of the points, with every reported distance recomputed through one
canonical float64 expression so tree and brute-force paths agree bit for bit.
Ties in distance are always broken by ascending node index.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .errors import DataError, DimensionMismatchError

# slack applied to tree query radii so knife-edge candidates are never
# missed; final membership is always decided by the canonical distance
_RADIUS_SLACK = 1e-9


@dataclass(frozen=True)
class NeighborList:
    """Ordered (neighbor, distance) result of a k-nearest query.

    Distances are non-decreasing; equal distances are ordered by ascending
    node index; the query point itself never appears.
    """

    query_id: int
    neighbors: list[tuple[int, float]]
    k: int

    def indices(self) -> list[int]:
        return [i for i, _ in self.neighbors]


def euclidean_distance(x, y) -> float:
    """Canonical Euclidean distance between two equal-length vectors."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise DimensionMismatchError(f"dimension mismatch: {x.shape} vs {y.shape}")
    return float(np.sqrt(((x - y) ** 2).sum(-1)))


def distances_from(points: np.ndarray, i: int) -> np.ndarray:
    """Canonical distances from points[i] to every row of points."""
    return np.sqrt(((points - points[i]) ** 2).sum(-1))


class SpatialIndex:
    """Immutable exact spatial index over a PointSet snapshot."""

    def __init__(self, points: np.ndarray):
        points = np.ascontiguousarray(np.asarray(points, dtype=np.float64))
        if points.ndim != 2 or points.shape[0] < 1:
            raise DataError("cannot index an empty point set")
        # private copy: later mutation of the caller's array must not leak in
        self._points = points.copy()
        self._points.setflags(write=False)
        self._tree = cKDTree(self._points)

    @property
    def n(self) -> int:
        return self._points.shape[0]

    @property
    def d(self) -> int:
        return self._points.shape[1]

    @property
    def points(self) -> np.ndarray:
        return self._points

    @property
    def tree(self) -> cKDTree:
        return self._tree

    def _check_query_id(self, query_id: int):
        if not (0 <= query_id < self.n):
            raise DataError(f"query_id {query_id} out of range [0, {self.n})")

    def knn(self, query_id: int, k: int, workers: int = 1) -> NeighborList:
        """Exact k nearest neighbors of node query_id (self excluded, capped at n-1)."""
        self._check_query_id(query_id)
        if k < 1:
            raise DataError(f"k must be >= 1, got {k}")
        idx, dist = self._knn_rows(np.array([query_id]), k, workers)
        pairs = list(zip(idx[0].tolist(), dist[0].tolist()))
        return NeighborList(query_id=query_id, neighbors=pairs, k=k)

    def knn_matrix(self, k: int, workers: int = 1) -> tuple[np.ndarray, np.ndarray]:
        """Neighbor indices/distances for every node, shape (n, min(k, n-1))."""
        if k < 1:
            raise DataError(f"k must be >= 1, got {k}")
        return self._knn_rows(np.arange(self.n), k, workers)

    def _knn_rows(self, query_ids: np.ndarray, k: int, workers: int):
        n = self.n
        k_eff = min(k, n - 1)
        if k_eff == 0:
            empty_i = np.empty((len(query_ids), 0), dtype=np.int64)
            return empty_i, np.empty((len(query_ids), 0), dtype=np.float64)
        q = min(k_eff + 2, n)
        _tree_d, tree_i = self._tree.query(self._points[query_ids], k=q, workers=workers)
        tree_i = tree_i.reshape(len(query_ids), q)

        # recompute distances canonically, push self to the back with an inf
        # sentinel, then order each row by (distance, index)
        diffs = self._points[tree_i] - self._points[query_ids][:, None, :]
        cand_d = np.sqrt((diffs**2).sum(-1))
        cand_i = tree_i.astype(np.int64)
        self_mask = cand_i == query_ids[:, None]
        cand_d[self_mask] = np.inf
        order = np.lexsort((cand_i, cand_d), axis=-1)
        cand_d = np.take_along_axis(cand_d, order, axis=1)
        cand_i = np.take_along_axis(cand_i, order, axis=1)

        out_i = np.ascontiguousarray(cand_i[:, :k_eff])
        out_d = np.ascontiguousarray(cand_d[:, :k_eff])
        if q < n:
            # a tie straddling the cut (or self crowded out of the window by
            # coincident points) makes the window inconclusive: resolve those
            # rows exactly with a full scan
            ambiguous = (cand_d[:, k_eff - 1] == cand_d[:, k_eff]) | np.isinf(
                out_d[:, k_eff - 1]
            )
            for row in np.flatnonzero(ambiguous):
                out_i[row], out_d[row] = self._exact_row(int(query_ids[row]), k_eff)
        return out_i, out_d

    def _exact_row(self, query_id: int, k_eff: int):
        d = distances_from(self._points, query_id)
        idx = np.arange(self.n)
        mask = idx != query_id
        idx, d = idx[mask], d[mask]
        order = np.lexsort((idx, d))
        return idx[order][:k_eff].astype(np.int64), d[order][:k_eff]

    def range(self, query_id: int, radius: float, workers: int = 1) -> np.ndarray:
        """Indices j != query_id with canonical distance strictly below radius."""
        self._check_query_id(query_id)
        if not radius > 0:
            raise DataError(f"radius must be positive, got {radius}")
        cand = self._tree.query_ball_point(
            self._points[query_id], radius * (1 + _RADIUS_SLACK), workers=workers
        )
        cand = np.asarray(sorted(cand), dtype=np.int64)
        cand = cand[cand != query_id]
        if cand.size == 0:
            return cand
        dist = np.sqrt(((self._points[cand] - self._points[query_id]) ** 2).sum(-1))
        return cand[dist < radius]

    def pairs_within(self, radius: float) -> np.ndarray:
        """All index pairs (u < v) with canonical distance strictly below radius."""
        if not radius > 0:
            raise DataError(f"radius must be positive, got {radius}")
        pairs = self._tree.query_pairs(radius * (1 + _RADIUS_SLACK), output_type="ndarray")
        if pairs.size == 0:
            return pairs.reshape(0, 2).astype(np.int64)
        d = np.sqrt(((self._points[pairs[:, 0]] - self._points[pairs[:, 1]]) ** 2).sum(-1))
        pairs = pairs[d < radius].astype(np.int64)
        lo = np.minimum(pairs[:, 0], pairs[:, 1])
        hi = np.maximum(pairs[:, 0], pairs[:, 1])
        out = np.stack([lo, hi], axis=1)
        return out[np.lexsort((out[:, 1], out[:, 0]))]


def build_index(ps) -> SpatialIndex:
    """Build an immutable exact index over a PointSet (or bare matrix)."""
    features = ps.features if hasattr(ps, "features") else ps
    return SpatialIndex(features)


def knn_query(idx: SpatialIndex, query_id: int, k: int, workers: int = 1) -> NeighborList:
    return idx.knn(query_id, k, workers=workers)


def range_query(idx: SpatialIndex, query_id: int, radius: float, workers: int = 1) -> np.ndarray:
    return idx.range(query_id, radius, workers=workers)


def brute_force_knn(ps, query_id: int, k: int) -> NeighborList:
    """Oracle-path kNN: full O(n) scan, same contract as knn_query."""
    features = ps.features if hasattr(ps, "features") else np.asarray(ps, dtype=np.float64)
    n = features.shape[0]
    if not (0 <= query_id < n):
        raise DataError(f"query_id {query_id} out of range [0, {n})")
    if k < 1:
        raise DataError(f"k must be >= 1, got {k}")
    d = np.sqrt(((features - features[query_id]) ** 2).sum(-1))
    idx = np.arange(n)
    mask = idx != query_id
    idx, d = idx[mask], d[mask]
    order = np.lexsort((idx, d))
    k_eff = min(k, n - 1)
    take = order[:k_eff]
    return NeighborList(
        query_id=query_id,
        neighbors=list(zip(idx[take].tolist(), d[take].tolist())),
        k=k,
    )
