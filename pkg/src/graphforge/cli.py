"""Batch CLI: ingest -> construct -> analyze -> export, plus oracle validation.

Exit codes: 0 success, 2 invalid arguments, 3 data errors, 4 construction
errors. Every run writes one manifest JSON next to its primary output.
Defaults mirror the evaluation protocol this toolkit targets: k=3,
metric=euclidean, epsilon=0.5.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, kernels, oracles
from .analysis import format_report, topology_report
from .bundle import bundle_config, read_bundle, read_meta, write_bundle
from .construct import ConstructionConfig, build_graph
from .errors import BundleError, ConstructionError, DataError, GraphForgeError
from .ingest import (
    ClassBalanceSpec,
    PointSet,
    dedup,
    load_csv,
    standardize_fit_transform,
    stratified_downsample,
    train_test_split,
)

DEFAULTS = {"k": 3, "epsilon": 0.5, "metric": "euclidean", "symmetrize": "union"}

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_CONSTRUCTION = 4


class UsageError(Exception):
    """Invalid flag combination detected after argparse."""


def _threads(value: int | None) -> int:
    if value is not None:
        return max(1, value)
    env = os.environ.get("GRAPHFORGE_THREADS", "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"GRAPHFORGE_THREADS is not an integer: {env!r}")
    return os.cpu_count() or 1


def _sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


class ManifestWriter:
    """Collects stage timings and run metadata; one JSON per CLI run."""

    def __init__(self, argv: list[str]):
        self.payload = {
            "tool": f"graphforge {__version__}",
            "argv": argv,
            "kernel_backend": kernels.backend_name(),
            "inputs": {},
            "outputs": [],
            "timings_s": {},
        }
        self._t0 = time.perf_counter()

    def add_input(self, path):
        self.payload["inputs"][str(path)] = _sha256_file(path)

    def add_output(self, path):
        self.payload["outputs"].append(str(path))

    def set(self, key, value):
        self.payload[key] = value

    def time_stage(self, name):
        writer = self

        class _Stage:
            def __enter__(self):
                self.start = time.perf_counter()

            def __exit__(self, *exc):
                writer.payload["timings_s"][name] = round(time.perf_counter() - self.start, 6)
                return False

        return _Stage()

    def write(self, path):
        self.payload["timings_s"]["total"] = round(time.perf_counter() - self._t0, 6)
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.payload, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _manifest_path(primary_output: Path) -> Path:
    return primary_output.with_name(primary_output.name.rstrip("/") + ".manifest.json")


def _write_points_csv(path: Path, ps: PointSet):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        header = ",".join(f"f{j}" for j in range(ps.d))
        if ps.labels is not None:
            header += ",label"
        fh.write(header + "\n")
        labels = ps.labels.tolist() if ps.labels is not None else None
        for i, row in enumerate(ps.features.tolist()):
            line = ",".join(repr(v) for v in row)
            if labels is not None:
                line += f",{labels[i]}"
            fh.write(line + "\n")


# ---------------------------------------------------------------- build


def _build_config(args) -> ConstructionConfig:
    file_cfg = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            file_cfg = json.load(fh)

    def pick(flag_value, key, default=None):
        if flag_value is not None:
            return flag_value
        if key in file_cfg:
            return file_cfg[key]
        return DEFAULTS.get(key, default)

    method = args.method
    gabriel_mode, cand_k = "exact", 20
    raw_mode = pick(args.gabriel_mode, "gabriel_mode")
    if raw_mode:
        if raw_mode.startswith("candidate"):
            gabriel_mode = "candidate"
            if ":" in raw_mode:
                try:
                    cand_k = int(raw_mode.split(":", 1)[1])
                except ValueError:
                    raise UsageError(f"bad --gabriel-mode {raw_mode!r}; use exact or candidate:N")
        elif raw_mode == "exact":
            gabriel_mode = "exact"
        else:
            raise UsageError(f"bad --gabriel-mode {raw_mode!r}; use exact or candidate:N")

    theta = pick(args.theta, "theta")
    if method == "snn" and theta is None:
        raise UsageError("method snn requires an explicit --theta (shared-neighbor threshold)")

    try:
        return ConstructionConfig(
            method=method,
            k=int(pick(args.k, "k")) if method in ("knn", "mnn", "snn") else pick(args.k, "k"),
            theta=int(theta) if theta is not None else None,
            epsilon=float(pick(args.epsilon, "epsilon")) if pick(args.epsilon, "epsilon") is not None else None,
            metric=pick(args.metric, "metric"),
            symmetrize=pick(args.symmetrize, "symmetrize"),
            gabriel_mode=gabriel_mode,
            gabriel_cand_k=cand_k,
            gabriel_boundary=pick(args.gabriel_boundary, "gabriel_boundary", "open"),
            snn_weighted=bool(args.snn_weighted or file_cfg.get("snn_weighted", False)),
        )
    except ConstructionError as exc:
        raise UsageError(str(exc))


def cmd_build(args, argv) -> int:
    config = _build_config(args)
    manifest = ManifestWriter(argv)
    manifest.add_input(args.input)
    manifest.set("seed", args.seed)
    threads = _threads(args.threads)
    manifest.set("threads", threads)

    with manifest.time_stage("load"):
        ps = load_csv(args.input, label_column=args.label_col, delimiter=args.delimiter)
    with manifest.time_stage("construct"):
        graph = build_graph(ps, config, threads=threads)
    with manifest.time_stage("write"):
        out = Path(args.out)
        write_bundle(graph, ps, out, overwrite=args.force)
        read_meta(out)  # post-write validation: bundle is complete and versioned
    manifest.set("config", config.to_dict())
    manifest.add_output(out)
    manifest.write(_manifest_path(out))
    print(f"wrote bundle: {out} ({graph.n_nodes} nodes, {graph.n_edges} edges)")
    return EXIT_OK


# ---------------------------------------------------------------- stats


def cmd_stats(args, argv) -> int:
    manifest = ManifestWriter(argv)
    with manifest.time_stage("load"):
        graph, ps = read_bundle(args.bundle)
    with manifest.time_stage("analyze"):
        report = topology_report(graph, labels=ps.labels)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2, sort_keys=True, default=str))
    else:
        print(format_report(report))
    if args.manifest:
        manifest.write(args.manifest)
    return EXIT_OK


# ---------------------------------------------------------------- validate


def _compare_method(ps: PointSet, config: ConstructionConfig, threads: int) -> tuple[bool, str]:
    graph = build_graph(ps, config, threads=threads)
    got = graph.edge_set()
    pts = ps.features
    method = config.method
    if method == "knn":
        want = oracles.knn_edges(pts, config.k, config.symmetrize)
    elif method == "mnn":
        want = oracles.mnn_edges(pts, config.k)
    elif method == "snn":
        want, _ = oracles.snn_edges(pts, config.k, config.resolved_theta())
    elif method == "epsilon":
        want = oracles.epsilon_edges(pts, config.epsilon)
    else:
        if config.gabriel_mode != "exact":
            # candidate mode is a documented subset approximation
            want = oracles.gabriel_edges(pts, config.gabriel_boundary)
            ok = got <= want
            return ok, "" if ok else f"{len(got - want)} candidate edges not in exact oracle set"
        want = oracles.gabriel_edges(pts, config.gabriel_boundary)
    if got == want:
        return True, ""
    return False, f"{len(got - want)} extra, {len(want - got)} missing (of {len(want)} oracle edges)"


def cmd_validate(args, argv) -> int:
    threads = _threads(args.threads)
    failures = 0
    if args.bundle:
        graph, ps = read_bundle(args.bundle)
        if ps.n > args.max_n:
            raise DataError(
                f"bundle has n={ps.n} > --max-n {args.max_n}; oracle check is O(n^2)/O(n^3)"
            )
        config = bundle_config(read_meta(args.bundle))
        if config is None:
            raise DataError("bundle has no construction config in provenance")
        rebuilt = build_graph(ps, config, threads=threads)
        if rebuilt.edge_set() != graph.edge_set():
            print(f"FAIL {args.bundle}: stored edges differ from reconstruction", file=sys.stderr)
            failures += 1
        ok, detail = _compare_method(ps, config, threads)
        status = "ok" if ok else f"MISMATCH: {detail}"
        print(f"{config.method} vs oracle: {status}")
        failures += 0 if ok else 1
    else:
        sizes = [int(s) for s in args.sizes.split(",")]
        dims = [int(s) for s in args.dims.split(",")]
        methods = args.methods.split(",")
        rng = np.random.default_rng(args.seed)
        for rep in range(args.sets):
            n = sizes[rep % len(sizes)]
            d = dims[(rep // len(sizes)) % len(dims)]
            ps = PointSet(features=rng.random((n, d)))
            for method in methods:
                config = _validate_config(method)
                ok, detail = _compare_method(ps, config, threads)
                if not ok:
                    print(f"FAIL set {rep} (n={n}, d={d}) {method}: {detail}", file=sys.stderr)
                    failures += 1
        print(f"validated {args.sets} random sets x {len(methods)} methods: {failures} mismatches")
    return EXIT_OK if failures == 0 else 1


def _validate_config(method: str) -> ConstructionConfig:
    if method == "knn":
        return ConstructionConfig(method="knn", k=3, symmetrize="union")
    if method == "mnn":
        return ConstructionConfig(method="mnn", k=3)
    if method == "snn":
        return ConstructionConfig(method="snn", k=3, theta=2)
    if method == "epsilon":
        return ConstructionConfig(method="epsilon", epsilon=0.5)
    if method == "gabriel":
        return ConstructionConfig(method="gabriel", gabriel_mode="exact")
    raise UsageError(f"unknown method {method!r}")


# ---------------------------------------------------------------- sample


def _parse_targets(pairs: list[str]) -> dict:
    targets = {}
    for pair in pairs:
        if "=" not in pair:
            raise UsageError(f"--target expects CLASS=COUNT, got {pair!r}")
        cls, count = pair.split("=", 1)
        try:
            targets[cls] = int(count)
        except ValueError:
            raise UsageError(f"--target count is not an integer: {pair!r}")
    return targets


def cmd_sample(args, argv) -> int:
    manifest = ManifestWriter(argv)
    manifest.add_input(args.input)
    manifest.set("seed", args.seed)
    with manifest.time_stage("load"):
        ps = load_csv(args.input, label_column=args.label_col, delimiter=args.delimiter)
    with manifest.time_stage("sample"):
        if not args.no_dedup:
            ps = dedup(ps)
        spec = ClassBalanceSpec(targets=_parse_targets(args.target), seed=args.seed)
        ps = stratified_downsample(ps, spec)
    with manifest.time_stage("write"):
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        _write_points_csv(out, ps)
    manifest.set("class_counts", {str(k): v for k, v in ps.class_counts().items()})
    manifest.add_output(out)
    manifest.write(_manifest_path(out))
    print(f"wrote {out}: {ps.n} rows, classes {ps.class_counts()}")
    return EXIT_OK


# ---------------------------------------------------------------- split


def cmd_split(args, argv) -> int:
    if not (0.0 < args.test_fraction < 1.0):
        raise UsageError(f"--test-fraction must be in (0,1), got {args.test_fraction}")
    manifest = ManifestWriter(argv)
    manifest.add_input(args.input)
    manifest.set("seed", args.seed)
    with manifest.time_stage("load"):
        ps = load_csv(args.input, label_column=args.label_col, delimiter=args.delimiter)
    with manifest.time_stage("split"):
        train, test = train_test_split(ps, args.test_fraction, args.seed)
        scaler = None
        if args.scale:
            train, test, scaler = standardize_fit_transform(train, test)
    with manifest.time_stage("write"):
        out_train, out_test = Path(args.out_train), Path(args.out_test)
        out_train.parent.mkdir(parents=True, exist_ok=True)
        out_test.parent.mkdir(parents=True, exist_ok=True)
        _write_points_csv(out_train, train)
        _write_points_csv(out_test, test)
        if scaler is not None and args.scaler_out:
            with open(args.scaler_out, "w", encoding="utf-8") as fh:
                fh.write(scaler.to_json() + "\n")
            manifest.add_output(args.scaler_out)
    manifest.set("split", {"train_rows": train.n, "test_rows": test.n})
    manifest.add_output(out_train)
    manifest.add_output(out_test)
    manifest.write(_manifest_path(out_train))
    print(f"wrote {out_train} ({train.n} rows) and {out_test} ({test.n} rows)")
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphforge",
        description="Convert tabular feature datasets into proximity-graph datasets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="construct a graph bundle from a feature CSV")
    b.add_argument("--input", required=True)
    b.add_argument("--method", required=True, choices=["knn", "mnn", "snn", "epsilon", "gabriel"])
    b.add_argument("--k", type=int)
    b.add_argument("--epsilon", type=float)
    b.add_argument("--theta", type=int)
    b.add_argument("--symmetrize", choices=["union", "none"])
    b.add_argument("--snn-weighted", action="store_true")
    b.add_argument("--gabriel-mode", help="exact or candidate:N")
    b.add_argument("--gabriel-boundary", choices=["open", "closed"])
    b.add_argument("--metric")
    b.add_argument("--label-col")
    b.add_argument("--delimiter", default=",")
    b.add_argument("--out", required=True)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--threads", type=int)
    b.add_argument("--config", help="JSON config file; flags take precedence")
    b.add_argument("--force", action="store_true", help="overwrite an existing bundle")

    s = sub.add_parser("stats", help="print a topology report for a bundle")
    s.add_argument("--bundle", required=True)
    s.add_argument("--json", action="store_true")
    s.add_argument("--manifest")

    v = sub.add_parser("validate", help="compare constructions against brute-force oracles")
    v.add_argument("--bundle")
    v.add_argument("--sets", type=int, default=10)
    v.add_argument("--sizes", default="50,200")
    v.add_argument("--dims", default="2,6")
    v.add_argument("--methods", default="knn,mnn,snn,epsilon,gabriel")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--max-n", type=int, default=2000)
    v.add_argument("--threads", type=int)

    p = sub.add_parser("sample", help="dedup + class-stratified down-sampling")
    p.add_argument("--input", required=True)
    p.add_argument("--label-col", required=True)
    p.add_argument("--target", action="append", required=True, help="CLASS=COUNT, repeatable")
    p.add_argument("--no-dedup", action="store_true")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    t = sub.add_parser("split", help="stratified train/test split, optional min-max scaling")
    t.add_argument("--input", required=True)
    t.add_argument("--label-col", required=True)
    t.add_argument("--test-fraction", type=float, default=0.2)
    t.add_argument("--scale", action="store_true", help="min-max scale (fit on train only)")
    t.add_argument("--scaler-out")
    t.add_argument("--delimiter", default=",")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--out-train", required=True)
    t.add_argument("--out-test", required=True)

    return parser


_HANDLERS = {
    "build": cmd_build,
    "stats": cmd_stats,
    "validate": cmd_validate,
    "sample": cmd_sample,
    "split": cmd_split,
}


def run(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _make_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args, argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, BundleError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except GraphForgeError as exc:
        print(f"construction error: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION


def main():  # console entry point
    sys.exit(run())


if __name__ == "__main__":
    main()
