"""GraphBundle: the on-disk interchange format for constructed graphs.

A bundle directory holds meta.json, features.csv, edges.csv and optionally
labels.csv / weights.csv. Writing is canonical and byte-stable: fixed header
names, "\n" line endings, shortest round-trip decimals for features, edges
sorted lexicographically with undirected edges stored once as u < v. meta.json
records the SHA-256 of features.csv, verified on load.
"""
from __future__ import annotations

import hashlib
import json
import os
import shutil
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .construct import ConstructionConfig, Graph
from .errors import BundleError
from .ingest import PointSet

FORMAT_VERSION = 1

META_NAME = "meta.json"
FEATURES_NAME = "features.csv"
EDGES_NAME = "edges.csv"
LABELS_NAME = "labels.csv"
WEIGHTS_NAME = "weights.csv"


@dataclass(frozen=True)
class GraphBundle:
    path: Path
    meta: dict


def _file_sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _write_features(path: Path, ps: PointSet):
    cols = ",".join(f"f{j}" for j in range(ps.d))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"row_id,{cols}\n")
        for rid, row in zip(ps.row_ids.tolist(), ps.features.tolist()):
            fh.write(f"{rid}," + ",".join(repr(v) for v in row) + "\n")


def _write_edges(path: Path, edges: np.ndarray):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("u,v\n")
        for u, v in edges.tolist():
            fh.write(f"{u},{v}\n")


def _write_single_column(path: Path, name: str, values) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{name}\n")
        for v in values:
            fh.write(f"{v}\n")


def write_bundle(g: Graph, ps: PointSet, path, overwrite: bool = False) -> GraphBundle:
    """Persist (graph, points) canonically; atomic via temp dir + rename."""
    if g.n_nodes != ps.n:
        raise BundleError(f"graph has {g.n_nodes} nodes but point set has {ps.n} rows")
    path = Path(path)
    if path.exists():
        if not overwrite:
            raise BundleError(f"output path already exists: {path}")
        shutil.rmtree(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + f".tmp-{os.getpid()}")
    if tmp.exists():
        shutil.rmtree(tmp)
    tmp.mkdir(parents=True)
    try:
        _write_features(tmp / FEATURES_NAME, ps)
        _write_edges(tmp / EDGES_NAME, g.edges)
        if ps.labels is not None:
            _write_single_column(tmp / LABELS_NAME, "label", ps.labels.tolist())
        if g.edge_weights is not None:
            _write_single_column(
                tmp / WEIGHTS_NAME, "weight", (repr(float(w)) for w in g.edge_weights)
            )
        meta = {
            "format_version": FORMAT_VERSION,
            "n_nodes": int(g.n_nodes),
            "n_edges": int(g.n_edges),
            "feature_dim": int(ps.d),
            "directed": bool(g.directed),
            "has_labels": ps.labels is not None,
            "has_weights": g.edge_weights is not None,
            "dedup_applied": bool(ps.dedup_applied),
            "features_sha256": _file_sha256(tmp / FEATURES_NAME),
            "provenance": g.provenance,
        }
        with open(tmp / META_NAME, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
            fh.write("\n")
        os.rename(tmp, path)
    except Exception:
        shutil.rmtree(tmp, ignore_errors=True)
        raise
    return GraphBundle(path=path, meta=meta)


def read_meta(path) -> dict:
    path = Path(path)
    meta_path = path / META_NAME
    if not meta_path.exists():
        raise BundleError(f"not a bundle (missing {META_NAME}): {path}")
    with open(meta_path, encoding="utf-8") as fh:
        meta = json.load(fh)
    version = meta.get("format_version")
    if version != FORMAT_VERSION:
        raise BundleError(f"unsupported bundle format_version {version!r} (expected {FORMAT_VERSION})")
    return meta


def read_bundle(path) -> tuple[Graph, PointSet]:
    """Load and validate a bundle; inverse of write_bundle on valid data."""
    path = Path(path)
    meta = read_meta(path)

    features_path = path / FEATURES_NAME
    if not features_path.exists():
        raise BundleError(f"missing {FEATURES_NAME} in {path}")
    digest = _file_sha256(features_path)
    if digest != meta["features_sha256"]:
        raise BundleError(
            f"checksum mismatch for {FEATURES_NAME}: file {digest} != meta {meta['features_sha256']}"
        )

    n = int(meta["n_nodes"])
    d = int(meta["feature_dim"])
    row_ids, features = _read_features(features_path, n, d)

    labels = None
    if meta.get("has_labels"):
        labels = _read_column(path / LABELS_NAME, "label", n)
        labels = np.asarray(labels)

    edges = _read_edges(path / EDGES_NAME, n, directed=bool(meta["directed"]))
    weights = None
    if meta.get("has_weights"):
        weights = np.asarray(
            [float(v) for v in _read_column(path / WEIGHTS_NAME, "weight", edges.shape[0])]
        )

    ps = PointSet(
        features=features,
        labels=labels,
        row_ids=row_ids,
        dedup_applied=bool(meta.get("dedup_applied", False)),
    )
    g = Graph(
        n_nodes=n,
        edges=edges,
        directed=bool(meta["directed"]),
        edge_weights=weights,
        provenance=meta.get("provenance", {}),
    )
    if g.n_edges != int(meta["n_edges"]):
        raise BundleError(
            f"edge count mismatch: {EDGES_NAME} has {g.n_edges}, meta says {meta['n_edges']}"
        )
    return g, ps


def _read_features(path: Path, n: int, d: int):
    row_ids = np.empty(n, dtype=np.int64)
    features = np.empty((n, d), dtype=np.float64)
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        expected = "row_id," + ",".join(f"f{j}" for j in range(d))
        if header != expected:
            raise BundleError(f"{path}: unexpected header {header!r}")
        i = 0
        for line in fh:
            parts = line.rstrip("\n").split(",")
            if len(parts) != d + 1:
                raise BundleError(f"{path}: row {i} has {len(parts)} fields, expected {d + 1}")
            if i >= n:
                raise BundleError(f"{path}: more rows than meta n_nodes={n}")
            row_ids[i] = int(parts[0])
            features[i] = [float(v) for v in parts[1:]]
            i += 1
    if i != n:
        raise BundleError(f"{path}: {i} rows, meta says {n}")
    return row_ids, features


def _read_edges(path: Path, n: int, directed: bool) -> np.ndarray:
    if not path.exists():
        raise BundleError(f"missing {EDGES_NAME}")
    rows = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != "u,v":
            raise BundleError(f"{path}: unexpected header {header!r}")
        for lineno, line in enumerate(fh):
            parts = line.rstrip("\n").split(",")
            if len(parts) != 2:
                raise BundleError(f"{path}: malformed edge row {lineno}: {line!r}")
            u, v = int(parts[0]), int(parts[1])
            if not (0 <= u < n and 0 <= v < n):
                raise BundleError(
                    f"{path}: edge row {lineno} ({u},{v}) references a node outside 0..{n - 1}"
                )
            if u == v:
                raise BundleError(f"{path}: edge row {lineno} is a self-loop")
            if not directed and not u < v:
                raise BundleError(f"{path}: edge row {lineno} violates u < v storage rule")
            rows.append((u, v))
    edges = np.asarray(rows, dtype=np.int64).reshape(-1, 2)
    if edges.shape[0] > 1:
        codes = edges[:, 0] * np.int64(n) + edges[:, 1]
        if (np.diff(codes) <= 0).any():
            raise BundleError(f"{path}: edges are not sorted lexicographically or contain duplicates")
    return edges


def _read_column(path: Path, name: str, expected_rows: int) -> list:
    if not path.exists():
        raise BundleError(f"missing {path.name}")
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != name:
            raise BundleError(f"{path}: unexpected header {header!r}")
        values = [line.rstrip("\n") for line in fh]
    if len(values) != expected_rows:
        raise BundleError(f"{path}: {len(values)} rows, expected {expected_rows}")
    return values


def bundle_config(meta: dict) -> ConstructionConfig | None:
    """ConstructionConfig recorded in a bundle's provenance, if any."""
    payload = meta.get("provenance", {}).get("config")
    return ConstructionConfig.from_dict(payload) if payload else None
