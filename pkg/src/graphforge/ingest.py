"""Tabular ingestion: CSV loading, dedup, stratified sampling, splitting, scaling.

All operations are pure functions of (input, seed). Sampling uses numpy's
PCG64 generator so runs reproduce across platforms.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import pandas as pd

from .errors import DataError, DimensionMismatchError


@dataclass(frozen=True)
class PointSet:
    """An n x d feature matrix with optional labels and stable row identifiers.

    ``row_ids`` track each row back to its original source position and
    survive dedup/sampling/splitting. ``dedup_applied`` flags that exact
    duplicates have been removed.
    """

    features: np.ndarray
    labels: np.ndarray | None = None
    row_ids: np.ndarray = field(default=None)  # type: ignore[assignment]
    dedup_applied: bool = False

    def __post_init__(self):
        feats = np.ascontiguousarray(np.asarray(self.features, dtype=np.float64))
        if feats.ndim != 2 or feats.shape[1] < 1:
            raise DataError(f"features must be a 2-D matrix with d >= 1, got shape {feats.shape}")
        object.__setattr__(self, "features", feats)
        if self.row_ids is None:
            object.__setattr__(self, "row_ids", np.arange(feats.shape[0], dtype=np.int64))
        else:
            rids = np.asarray(self.row_ids, dtype=np.int64)
            if rids.shape != (feats.shape[0],):
                raise DataError("row_ids length must equal number of rows")
            if np.unique(rids).size != rids.size:
                raise DataError("row_ids must be unique")
            object.__setattr__(self, "row_ids", rids)
        if self.labels is not None:
            labels = np.asarray(self.labels)
            if labels.shape != (feats.shape[0],):
                raise DataError("labels length must equal number of rows")
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]

    def class_counts(self) -> dict:
        """Histogram of labels; raises if the set is unlabeled."""
        if self.labels is None:
            raise DataError("point set has no labels")
        values, counts = np.unique(self.labels, return_counts=True)
        return {v: int(c) for v, c in zip(values.tolist(), counts.tolist())}


@dataclass(frozen=True)
class ClassBalanceSpec:
    """Per-class target counts plus the seed used to sample them."""

    targets: dict
    seed: int = 0

    def __post_init__(self):
        for cls, count in self.targets.items():
            if int(count) < 0:
                raise DataError(f"target for class {cls!r} must be non-negative")


@dataclass(frozen=True)
class ScalerParams:
    """Per-column min/max fitted on a training set."""

    mins: np.ndarray
    maxs: np.ndarray

    def to_json(self) -> str:
        cols = {
            str(i): {"min": float(lo), "max": float(hi)}
            for i, (lo, hi) in enumerate(zip(self.mins, self.maxs))
        }
        return json.dumps(cols, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ScalerParams":
        cols = json.loads(text)
        d = len(cols)
        mins = np.empty(d)
        maxs = np.empty(d)
        for key, bounds in cols.items():
            mins[int(key)] = bounds["min"]
            maxs[int(key)] = bounds["max"]
        return cls(mins=mins, maxs=maxs)

    def transform(self, features: np.ndarray) -> np.ndarray:
        if features.shape[1] != self.mins.shape[0]:
            raise DimensionMismatchError(
                f"scaler fitted on d={self.mins.shape[0]}, got d={features.shape[1]}"
            )
        span = self.maxs - self.mins
        out = np.zeros_like(features, dtype=np.float64)
        nonconst = span > 0
        out[:, nonconst] = (features[:, nonconst] - self.mins[nonconst]) / span[nonconst]
        return out


def load_csv(path, label_column: str | None = None, delimiter: str = ",") -> PointSet:
    """Load a headered CSV of finite real features into a PointSet.

    row_ids are assigned in 0-based file order. All non-label columns must
    parse as finite float64; the first offending cell is reported by
    (data row, column name).
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"input file not found: {path}")
    try:
        frame = pd.read_csv(path, delimiter=delimiter, header=0, dtype=str,
                            skip_blank_lines=True, na_filter=False)
    except pd.errors.EmptyDataError:
        raise DataError(f"{path}: no data rows")
    except pd.errors.ParserError as exc:
        raise DataError(f"{path}: {_diagnose_ragged(path, delimiter) or exc}")
    if frame.shape[0] == 0:
        raise DataError(f"{path}: no data rows")

    columns = list(frame.columns)
    if label_column is not None:
        if label_column not in columns:
            raise DataError(f"{path}: label column {label_column!r} not present (have {columns})")
        labels = frame[label_column].to_numpy()
        feature_cols = [c for c in columns if c != label_column]
    else:
        labels = None
        feature_cols = columns
    if not feature_cols:
        raise DataError(f"{path}: no feature columns")

    raw = frame[feature_cols].to_numpy()
    try:
        features = raw.astype(np.float64)
    except ValueError:
        _raise_ragged_or_bad_cell(raw, feature_cols, path, numeric=False, delimiter=delimiter)
    if not np.isfinite(features).all():
        _raise_ragged_or_bad_cell(features, feature_cols, path, numeric=True, delimiter=delimiter)
    return PointSet(features=features, labels=labels)


def _raise_ragged_or_bad_cell(values, feature_cols, path, numeric: bool, delimiter: str):
    # short rows surface as padded NaN cells; prefer the raggedness diagnosis
    ragged = _diagnose_ragged(path, delimiter)
    if ragged is not None:
        raise DataError(f"{path}: {ragged}")
    _raise_bad_cell(values, feature_cols, path, numeric=numeric)


def _raise_bad_cell(values, feature_cols, path, numeric: bool):
    """Locate the first non-parseable or non-finite cell and report it."""
    for i, row in enumerate(values):
        for j, cell in enumerate(row):
            if numeric:
                bad = not np.isfinite(cell)
            else:
                try:
                    bad = not np.isfinite(float(cell))
                except (TypeError, ValueError):
                    bad = True
            if bad:
                raise DataError(
                    f"{path}: non-finite or non-numeric value {cell!r} "
                    f"at data row {i}, column {feature_cols[j]!r}"
                )
    raise DataError(f"{path}: could not parse feature matrix")


def _diagnose_ragged(path: Path, delimiter: str) -> str | None:
    """Find the first row whose column count differs from the header's."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        header = next(reader, None)
        if header is None:
            return "empty file"
        width = len(header)
        for i, row in enumerate(reader):
            if row and len(row) != width:
                return f"data row {i} has {len(row)} columns, header has {width}"
    return None


def dedup(ps: PointSet) -> PointSet:
    """Drop exact duplicate rows, keeping the first occurrence of each.

    Equality is bitwise over the feature row and includes the label when
    labels are present. Idempotent.
    """
    seen = set()
    keep = np.zeros(ps.n, dtype=bool)
    labels = ps.labels
    feats = ps.features
    for i in range(ps.n):
        key = (feats[i].tobytes(), None if labels is None else labels[i])
        if key not in seen:
            seen.add(key)
            keep[i] = True
    return PointSet(
        features=feats[keep],
        labels=None if labels is None else labels[keep],
        row_ids=ps.row_ids[keep],
        dedup_applied=True,
    )


def stratified_downsample(ps: PointSet, spec: ClassBalanceSpec) -> PointSet:
    """Sample each class down to its target count, uniformly without replacement.

    Deterministic given spec.seed (PCG64); the relative order of retained
    rows is preserved.
    """
    if ps.labels is None:
        raise DataError("stratified_downsample requires labels")
    counts = ps.class_counts()
    for cls, target in spec.targets.items():
        if cls not in counts:
            raise DataError(f"unknown class in spec: {cls!r}")
        if int(target) > counts[cls]:
            raise DataError(
                f"target exceeds available for class {cls!r}: {target} > {counts[cls]}"
            )
    rng = np.random.default_rng(spec.seed)
    chosen = []
    # iterate classes in sorted order so the RNG stream is input-order independent
    for cls in sorted(spec.targets, key=str):
        idx = np.flatnonzero(ps.labels == cls)
        take = int(spec.targets[cls])
        chosen.append(rng.choice(idx, size=take, replace=False))
    mask = np.sort(np.concatenate(chosen)) if chosen else np.array([], dtype=np.int64)
    return replace(
        ps,
        features=ps.features[mask],
        labels=ps.labels[mask],
        row_ids=ps.row_ids[mask],
    )


def _per_class_test_counts(class_sizes: list[tuple[object, int]], test_fraction: float, n: int):
    """Allocate round(test_fraction*n) test rows across classes.

    Per-class floor of fraction*size, remainder to the largest fractional
    parts, ties broken by class order.
    """
    total = int(np.floor(test_fraction * n + 0.5))
    exact = [test_fraction * size for _, size in class_sizes]
    base = [int(np.floor(t)) for t in exact]
    remainder = total - sum(base)
    order = sorted(
        range(len(class_sizes)),
        key=lambda i: (-(exact[i] - base[i]), i),
    )
    counts = list(base)
    for i in order:
        if remainder <= 0:
            break
        if counts[i] < class_sizes[i][1]:
            counts[i] += 1
            remainder -= 1
    return counts


def train_test_split(ps: PointSet, test_fraction: float, seed: int) -> tuple[PointSet, PointSet]:
    """Stratified partition into (train, test); deterministic given seed."""
    if not (0.0 < test_fraction < 1.0):
        raise DataError(f"test_fraction must be in (0, 1), got {test_fraction}")
    if ps.labels is None:
        raise DataError("train_test_split requires labels")
    if ps.n < 5:
        raise DataError(f"need at least 5 rows to split, got {ps.n}")

    classes = sorted(ps.class_counts().items(), key=lambda kv: str(kv[0]))
    test_counts = _per_class_test_counts(classes, test_fraction, ps.n)
    rng = np.random.default_rng(seed)
    test_rows = []
    for (cls, _size), take in zip(classes, test_counts):
        idx = np.flatnonzero(ps.labels == cls)
        test_rows.append(rng.choice(idx, size=take, replace=False))
    test_mask = np.zeros(ps.n, dtype=bool)
    if test_rows:
        test_mask[np.concatenate(test_rows).astype(np.int64)] = True

    def _take(mask):
        return replace(
            ps,
            features=ps.features[mask],
            labels=ps.labels[mask],
            row_ids=ps.row_ids[mask],
        )

    return _take(~test_mask), _take(test_mask)


def standardize_fit_transform(
    train: PointSet, test: PointSet
) -> tuple[PointSet, PointSet, ScalerParams]:
    """Min-max scale both sets using column ranges fitted on train only.

    Train columns map into [0, 1]; constant train columns map to 0; test
    values are not clipped and may leave [0, 1].
    """
    if train.d != test.d:
        raise DimensionMismatchError(f"train d={train.d} != test d={test.d}")
    params = ScalerParams(mins=train.features.min(axis=0), maxs=train.features.max(axis=0))
    scaled_train = replace(train, features=params.transform(train.features))
    scaled_test = replace(test, features=params.transform(test.features))
    return scaled_train, scaled_test, params
