"""Topology diagnostics: components, degrees, fragmentation, label homophily.

Directed graphs are analyzed on their underlying undirected form for
connectivity (weak components are what matters for message passing), while
degree statistics report out-degree.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .construct import Graph
from .errors import DataError


@dataclass(frozen=True)
class TopologyReport:
    n_nodes: int
    n_edges: int
    directed: bool
    min_degree: float
    max_degree: float
    mean_degree: float
    isolated_count: int
    n_components: int
    largest_component_fraction: float
    homophily: float | None = None
    per_class_homophily: dict | None = None

    def to_dict(self) -> dict:
        return asdict(self)


class UnionFind:
    """Array union-find with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = np.arange(n, dtype=np.int64)
        self.size = np.ones(n, dtype=np.int64)

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return int(x)

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]


def connected_components(g: Graph) -> tuple[int, np.ndarray]:
    """Component count and per-node component ids.

    Ids are dense 0..n_components-1, ordered by each component's smallest
    member node index. Directed graphs are treated as undirected.
    """
    n = g.n_nodes
    uf = UnionFind(n)
    for u, v in g.undirected_edges():
        uf.union(int(u), int(v))
    roots = np.fromiter((uf.find(i) for i in range(n)), count=n, dtype=np.int64)
    # first occurrence order == smallest member order
    _, first_pos, inverse = np.unique(roots, return_index=True, return_inverse=True)
    rank = np.argsort(np.argsort(first_pos))
    component_id = rank[inverse]
    return int(component_id.max()) + 1 if n else 0, component_id


def topology_report(g: Graph, labels: np.ndarray | None = None) -> TopologyReport:
    """Full diagnostic report; homophily fields require labels."""
    n = g.n_nodes
    if labels is not None:
        labels = np.asarray(labels)
        if labels.shape != (n,):
            raise DataError(f"labels length {labels.shape} does not match n_nodes {n}")

    if g.directed:
        degrees = np.bincount(g.edges[:, 0], minlength=n)
    else:
        degrees = np.bincount(g.edges.reshape(-1), minlength=n)

    n_components, comp_ids = connected_components(g)
    comp_sizes = np.bincount(comp_ids) if n else np.array([0])

    homophily = None
    per_class = None
    if labels is not None:
        edges = g.edges
        if edges.shape[0] == 0:
            homophily = 0.0
            per_class = {}
        else:
            lu = labels[edges[:, 0]]
            lv = labels[edges[:, 1]]
            same = lu == lv
            homophily = float(same.mean())
            per_class = {}
            for cls in np.unique(labels).tolist():
                touches = (lu == cls) | (lv == cls)
                if touches.any():
                    per_class[cls] = float((same & touches).sum() / touches.sum())
                else:
                    per_class[cls] = 0.0

    return TopologyReport(
        n_nodes=n,
        n_edges=g.n_edges,
        directed=g.directed,
        min_degree=float(degrees.min()) if n else 0.0,
        max_degree=float(degrees.max()) if n else 0.0,
        mean_degree=float(degrees.mean()) if n else 0.0,
        isolated_count=int((comp_sizes == 1).sum()),
        n_components=n_components,
        largest_component_fraction=float(comp_sizes.max() / n) if n else 0.0,
        homophily=homophily,
        per_class_homophily=per_class,
    )


def format_report(report: TopologyReport) -> str:
    """Aligned plain-text rendering used by the stats CLI."""
    rows = []
    payload = report.to_dict()
    per_class = payload.pop("per_class_homophily")
    for key, value in payload.items():
        if value is None:
            continue
        if isinstance(value, float):
            rows.append((key, f"{value:.6g}"))
        else:
            rows.append((key, str(value)))
    if per_class:
        for cls, frac in per_class.items():
            rows.append((f"homophily[{cls}]", f"{frac:.6g}"))
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)
