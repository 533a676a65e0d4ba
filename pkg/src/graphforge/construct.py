"""The five tabular-to-graph constructors: kNN, mutual-kNN, SNN, epsilon, Gabriel.

Each constructor is a pure function (PointSet, parameters) -> Graph. Edge
sets are canonicalized (undirected edges stored once as u < v, rows sorted
lexicographically, no duplicates) so identical inputs give identical graphs
regardless of thread count or backend.
"""
from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import CoincidentPointsError, ConstructionError, DataError
from .index import SpatialIndex, build_index
from .ingest import PointSet

_METHODS = ("knn", "mnn", "snn", "epsilon", "gabriel")

# relative inflation of blocker ball queries; membership is always decided
# by the exact dot-product test afterwards
_BALL_SLACK = 1e-9

# pair chunk size for candidate-mode blocker queries, bounds peak memory
_PAIR_CHUNK = 200_000


@dataclass(frozen=True)
class ConstructionConfig:
    """Construction method plus every method parameter, all recorded in provenance."""

    method: str
    k: int | None = None
    theta: int | None = None
    epsilon: float | None = None
    metric: str = "euclidean"
    symmetrize: str = "union"
    gabriel_mode: str = "exact"
    gabriel_cand_k: int = 20
    gabriel_boundary: str = "open"
    snn_weighted: bool = False

    def __post_init__(self):
        if self.method not in _METHODS:
            raise ConstructionError(f"unknown method {self.method!r}, expected one of {_METHODS}")
        if self.metric != "euclidean":
            raise ConstructionError(f"unsupported metric {self.metric!r}; only 'euclidean' is implemented")
        if self.symmetrize not in ("none", "union"):
            raise ConstructionError(f"symmetrize must be 'none' or 'union', got {self.symmetrize!r}")
        if self.gabriel_mode not in ("exact", "candidate"):
            raise ConstructionError(f"gabriel_mode must be 'exact' or 'candidate', got {self.gabriel_mode!r}")
        if self.gabriel_boundary not in ("open", "closed"):
            raise ConstructionError(f"gabriel_boundary must be 'open' or 'closed', got {self.gabriel_boundary!r}")
        if self.method in ("knn", "mnn", "snn"):
            if self.k is None or self.k < 1:
                raise ConstructionError(f"method {self.method!r} requires k >= 1")
        if self.method == "snn":
            theta = self.theta if self.theta is not None else 2
            if not (1 <= theta <= self.k):
                raise ConstructionError(f"snn requires 1 <= theta <= k, got theta={theta}, k={self.k}")
        if self.method == "epsilon":
            if self.epsilon is None or not self.epsilon > 0:
                raise ConstructionError("epsilon method requires epsilon > 0")
        if self.method == "gabriel" and self.gabriel_cand_k < 1:
            raise ConstructionError(f"gabriel_cand_k must be >= 1, got {self.gabriel_cand_k}")

    def resolved_theta(self) -> int:
        return self.theta if self.theta is not None else 2

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "k": self.k,
            "theta": self.theta,
            "epsilon": self.epsilon,
            "metric": self.metric,
            "symmetrize": self.symmetrize,
            "gabriel_mode": self.gabriel_mode,
            "gabriel_cand_k": self.gabriel_cand_k,
            "gabriel_boundary": self.gabriel_boundary,
            "snn_weighted": self.snn_weighted,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "ConstructionConfig":
        return cls(**payload)


@dataclass(frozen=True)
class Graph:
    """Node count plus a canonical edge array and construction provenance.

    edges has shape (m, 2); undirected graphs store each edge once with
    u < v; rows are sorted lexicographically and unique in both cases.
    """

    n_nodes: int
    edges: np.ndarray
    directed: bool = False
    edge_weights: np.ndarray | None = None
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        weights = self.edge_weights
        if weights is not None:
            weights = np.asarray(weights, dtype=np.float64)
            if weights.shape != (edges.shape[0],):
                raise ConstructionError("edge_weights length must match edge count")
        if edges.size:
            if edges.min() < 0 or edges.max() >= self.n_nodes:
                raise ConstructionError("edge index out of range")
            if (edges[:, 0] == edges[:, 1]).any():
                raise ConstructionError("self-loops are not permitted")
            if not self.directed:
                lo = np.minimum(edges[:, 0], edges[:, 1])
                hi = np.maximum(edges[:, 0], edges[:, 1])
                edges = np.stack([lo, hi], axis=1)
            codes = edges[:, 0] * np.int64(self.n_nodes) + edges[:, 1]
            uniq, first = np.unique(codes, return_index=True)
            edges = np.stack([uniq // self.n_nodes, uniq % self.n_nodes], axis=1)
            if weights is not None:
                weights = weights[first]
        edges = np.ascontiguousarray(edges)
        edges.setflags(write=False)
        object.__setattr__(self, "edges", edges)
        if weights is not None:
            weights.setflags(write=False)
        object.__setattr__(self, "edge_weights", weights)

    @property
    def n_edges(self) -> int:
        return self.edges.shape[0]

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(u), int(v)) for u, v in self.edges}

    def undirected_edges(self) -> np.ndarray:
        """Underlying undirected edge array (u < v, sorted, deduplicated)."""
        if not self.directed:
            return self.edges
        if self.edges.size == 0:
            return self.edges
        lo = np.minimum(self.edges[:, 0], self.edges[:, 1])
        hi = np.maximum(self.edges[:, 0], self.edges[:, 1])
        codes = np.unique(lo * np.int64(self.n_nodes) + hi)
        return np.stack([codes // self.n_nodes, codes % self.n_nodes], axis=1)


def dataset_checksum(ps: PointSet) -> str:
    """SHA-256 over the in-memory feature matrix (C-order float64 bytes)."""
    return hashlib.sha256(np.ascontiguousarray(ps.features).tobytes()).hexdigest()


def _provenance(ps: PointSet, config: ConstructionConfig) -> dict:
    return {"config": config.to_dict(), "dataset_checksum": dataset_checksum(ps)}


def _require_n(ps: PointSet, minimum: int = 2):
    if ps.n < minimum:
        raise ConstructionError(f"need at least {minimum} points, got {ps.n}")


def knn_graph(ps: PointSet, k: int, symmetrize: str = "none", threads: int = 1) -> Graph:
    """Directed graph i -> j for each of i's k nearest neighbors.

    symmetrize="union" collapses it to an undirected graph with an edge
    wherever at least one direction exists. Every node has out-degree
    min(k, n-1) in the directed form, so union graphs have no isolated nodes.
    """
    _require_n(ps)
    cfg = ConstructionConfig(method="knn", k=k, symmetrize=symmetrize)
    nbr_idx, _ = build_index(ps).knn_matrix(k, workers=threads)
    n, k_eff = ps.n, nbr_idx.shape[1]
    src = np.repeat(np.arange(n, dtype=np.int64), k_eff)
    dst = nbr_idx.reshape(-1)
    edges = np.stack([src, dst], axis=1)
    return Graph(
        n_nodes=n,
        edges=edges,
        directed=(symmetrize == "none"),
        provenance=_provenance(ps, cfg),
    )


def mnn_graph(ps: PointSet, k: int, threads: int = 1) -> Graph:
    """Undirected graph with an edge only where both endpoints are in each
    other's k-neighbor sets. Isolated nodes are permitted."""
    _require_n(ps)
    cfg = ConstructionConfig(method="mnn", k=k)
    nbr_idx, _ = build_index(ps).knn_matrix(k, workers=threads)
    n, k_eff = ps.n, nbr_idx.shape[1]
    src = np.repeat(np.arange(n, dtype=np.int64), k_eff)
    dst = nbr_idx.reshape(-1).astype(np.int64)
    codes = src * np.int64(n) + dst
    reverse = dst * np.int64(n) + src
    mutual = np.isin(codes, reverse, assume_unique=True)
    edges = np.stack([src[mutual], dst[mutual]], axis=1)
    return Graph(n_nodes=n, edges=edges, directed=False, provenance=_provenance(ps, cfg))


def snn_similarity(ps: PointSet, a: int, b: int, k: int, index: SpatialIndex | None = None) -> int:
    """Number of shared members of the two k-neighbor sets (self never counted)."""
    if a == b:
        raise DataError("snn_similarity requires two distinct nodes")
    idx = index if index is not None else build_index(ps)
    set_a = set(idx.knn(a, k).indices())
    set_b = set(idx.knn(b, k).indices())
    return len(set_a & set_b)


def snn_graph(
    ps: PointSet, k: int, theta: int, weighted: bool = False, threads: int = 1
) -> Graph:
    """Undirected graph with an edge where two nodes share >= theta k-neighbors.

    Built exactly from co-occurrence counting over inverted neighbor lists:
    only pairs sharing at least one neighbor are ever materialized, and their
    multiplicity across lists is precisely the shared-neighbor count.
    """
    _require_n(ps)
    cfg = ConstructionConfig(method="snn", k=k, theta=theta, snn_weighted=weighted)
    theta = cfg.resolved_theta()
    nbr_idx, _ = build_index(ps).knn_matrix(k, workers=threads)
    n, k_eff = ps.n, nbr_idx.shape[1]

    owners = np.repeat(np.arange(n, dtype=np.int64), k_eff)
    members = nbr_idx.reshape(-1).astype(np.int64)
    order = np.argsort(members, kind="stable")
    owners = np.ascontiguousarray(owners[order])
    members = members[order]
    boundaries = np.flatnonzero(np.diff(members)) + 1
    indptr = np.concatenate([[0], boundaries, [owners.size]]).astype(np.int64)

    codes = kernels.snn_cooccurrence_codes(owners, indptr, n)
    uniq, counts = np.unique(codes, return_counts=True)
    keep = counts >= theta
    uniq = uniq[keep]
    edges = np.stack([uniq // n, uniq % n], axis=1)
    weights = counts[keep].astype(np.float64) if weighted else None
    return Graph(
        n_nodes=n,
        edges=edges,
        directed=False,
        edge_weights=weights,
        provenance=_provenance(ps, cfg),
    )


def epsilon_graph(ps: PointSet, epsilon: float, threads: int = 1) -> Graph:
    """Undirected graph joining points with distance strictly below epsilon."""
    _require_n(ps)
    cfg = ConstructionConfig(method="epsilon", epsilon=epsilon)
    edges = build_index(ps).pairs_within(epsilon)
    return Graph(n_nodes=ps.n, edges=edges, directed=False, provenance=_provenance(ps, cfg))


def gabriel_pair_test(ps: PointSet, a: int, b: int, boundary: str = "open") -> bool:
    """True iff no other point strictly blocks the pair's diameter sphere.

    Uses the identity |C - (A+B)/2|^2 - (|A-B|/2)^2 == (C-A).(C-B), so the
    test is squared-distance arithmetic with no square roots. boundary=
    "closed" also treats points exactly on the sphere as blockers.
    """
    if a == b:
        raise DataError("gabriel_pair_test requires two distinct nodes")
    pts = ps.features
    if np.array_equal(pts[a], pts[b]):
        raise CoincidentPointsError(f"nodes {a} and {b} are coincident")
    dots = ((pts - pts[a]) * (pts - pts[b])).sum(-1)
    dots[a] = np.inf
    dots[b] = np.inf
    blocked = (dots <= 0) if boundary == "closed" else (dots < 0)
    return not bool(blocked.any())


def _check_no_coincident(ps: PointSet):
    _, counts = np.unique(ps.features, axis=0, return_counts=True)
    if (counts > 1).any():
        raise CoincidentPointsError(
            "coincident feature rows present; run dedup before gabriel construction"
        )


def gabriel_graph(
    ps: PointSet,
    mode: str = "exact",
    cand_k: int = 20,
    boundary: str = "open",
    threads: int = 1,
) -> Graph:
    """Gabriel graph: edge {a, b} iff no third point blocks the AB-diameter sphere.

    mode="exact" tests all pairs (with early-exit blocker scans); mode=
    "candidate" only tests pairs within each node's cand_k nearest neighbors
    but each tested pair is still checked exactly, so candidate edges are a
    subset of exact edges.
    """
    _require_n(ps)
    cfg = ConstructionConfig(
        method="gabriel", gabriel_mode=mode, gabriel_cand_k=cand_k, gabriel_boundary=boundary
    )
    _check_no_coincident(ps)
    closed = boundary == "closed"
    pts = np.ascontiguousarray(ps.features)

    if mode == "exact":
        edges = kernels.gabriel_exact_edges(pts, closed)
    else:
        index = build_index(ps)
        nbr_idx, _ = index.knn_matrix(cand_k, workers=threads)
        src = np.repeat(np.arange(ps.n, dtype=np.int64), nbr_idx.shape[1])
        dst = nbr_idx.reshape(-1).astype(np.int64)
        lo = np.minimum(src, dst)
        hi = np.maximum(src, dst)
        codes = np.unique(lo * np.int64(ps.n) + hi)
        pairs = np.stack([codes // ps.n, codes % ps.n], axis=1)
        kept = [_filter_gabriel_pairs(pts, index, chunk, closed, threads)
                for chunk in np.array_split(pairs, max(1, len(pairs) // _PAIR_CHUNK))]
        edges = np.concatenate(kept) if kept else np.empty((0, 2), dtype=np.int64)

    return Graph(n_nodes=ps.n, edges=edges, directed=False, provenance=_provenance(ps, cfg))


def _filter_gabriel_pairs(
    pts: np.ndarray, index: SpatialIndex, pairs: np.ndarray, closed: bool, threads: int
) -> np.ndarray:
    """Exact Gabriel filtering of candidate pairs via midpoint ball queries.

    Any strict blocker of (a, b) lies inside the ball of radius |AB|/2 around
    the midpoint, so querying that ball (slightly inflated) yields every
    point the exact dot-product test could possibly reject."""
    if pairs.size == 0:
        return pairs.reshape(0, 2)
    mids = 0.5 * (pts[pairs[:, 0]] + pts[pairs[:, 1]])
    dist = np.sqrt(((pts[pairs[:, 0]] - pts[pairs[:, 1]]) ** 2).sum(-1))
    radii = 0.5 * dist * (1.0 + _BALL_SLACK)
    balls = index.tree.query_ball_point(mids, radii, workers=threads)
    lens = np.fromiter(map(len, balls), count=len(balls), dtype=np.int64)
    indptr = np.concatenate([[0], np.cumsum(lens)]).astype(np.int64)
    cands = np.fromiter(
        itertools.chain.from_iterable(balls), count=int(lens.sum()), dtype=np.int64
    )
    blocked = kernels.gabriel_blocked_mask(
        pts, np.ascontiguousarray(pairs), indptr, cands, closed
    )
    return pairs[~blocked]


def build_graph(ps: PointSet, config: ConstructionConfig, threads: int = 1) -> Graph:
    """Dispatch a ConstructionConfig to the matching constructor."""
    if config.method == "knn":
        return knn_graph(ps, config.k, symmetrize=config.symmetrize, threads=threads)
    if config.method == "mnn":
        return mnn_graph(ps, config.k, threads=threads)
    if config.method == "snn":
        return snn_graph(
            ps, config.k, config.resolved_theta(), weighted=config.snn_weighted, threads=threads
        )
    if config.method == "epsilon":
        return epsilon_graph(ps, config.epsilon, threads=threads)
    return gabriel_graph(
        ps,
        mode=config.gabriel_mode,
        cand_k=config.gabriel_cand_k,
        boundary=config.gabriel_boundary,
        threads=threads,
    )
