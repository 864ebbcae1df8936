"""Headless driver: train, distances, clusters, payload export, serve."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import payloads
from .dataset import DEFAULT_SEED, Dataset, IngestError, ingest_csv, load_builtin
from .forest import ForestImportError, TrainParams, export_forest, import_forest, train_forest
from .session import Session, dataset_doc, dataset_from_doc, params_from_doc
from .viewmodel import FilterState, filter_from_doc


def _add_train_params(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--trees", type=int, default=100)
    parser.add_argument("--max-depth", type=int, default=None)
    parser.add_argument("--min-samples-split", type=int, default=2)
    parser.add_argument("--features-per-split", type=int, default=None)
    parser.add_argument("--no-bootstrap", action="store_true")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--test-fraction", type=float, default=0.3)


def _params(args) -> TrainParams:
    return TrainParams(
        n_trees=args.trees,
        max_depth=args.max_depth,
        min_samples_split=args.min_samples_split,
        features_per_split=args.features_per_split,
        bootstrap=not args.no_bootstrap,
        seed=args.seed,
        test_fraction=args.test_fraction,
    )


def _load_dataset(path: str, label: str | None, seed: int, test_fraction: float) -> Dataset:
    if path in ("glass", "penguin"):
        return load_builtin(path, seed=seed, test_fraction=test_fraction)
    return ingest_csv(
        Path(path).read_bytes(),
        label_column=label,
        name=Path(path).stem,
        seed=seed,
        test_fraction=test_fraction,
    )


def _load_session(forest_path: str) -> Session:
    """Read a forest file written by `train` (interchange + embedded dataset)."""
    doc = json.loads(Path(forest_path).read_text())
    if "dataset" not in doc:
        raise ForestImportError(
            f"{forest_path}: no embedded dataset; regenerate the file with `forestmap train`"
        )
    dataset = dataset_from_doc(doc["dataset"])
    params = params_from_doc(doc["params"]) if "params" in doc else None
    forest = import_forest(json.dumps(doc), dataset, params)
    return Session.create(dataset, forest, session_id="cli")


def _parse_filter_specs(specs: list[str], dataset: Dataset) -> FilterState:
    """`feature:lo..hi` and `cell:TRUE->PRED`; names or indices, repeatable."""
    feature_idx = {m.name: i for i, m in enumerate(dataset.features)}
    class_idx = {c: i for i, c in enumerate(dataset.classes)}

    def feat(token: str) -> int:
        if token in feature_idx:
            return feature_idx[token]
        return int(token)

    def cls(token: str) -> int:
        if token in class_idx:
            return class_idx[token]
        return int(token)

    ranges = []
    cells = []
    for spec in specs:
        if spec.startswith("cell:"):
            true_s, pred_s = spec[len("cell:"):].split("->")
            cells.append((cls(true_s.strip()), cls(pred_s.strip())))
        else:
            name, _, bounds = spec.rpartition(":")
            lo_s, _, hi_s = bounds.partition("..")
            ranges.append([feat(name), float(lo_s), float(hi_s)])
    flt = filter_from_doc({"ranges": ranges, "cells": cells})
    flt.validate(dataset)
    return flt


def cmd_train(args) -> int:
    params = _params(args)
    dataset = _load_dataset(args.csv, args.label, params.seed, params.test_fraction)
    forest = train_forest(dataset, params)
    doc = json.loads(export_forest(forest))
    doc["dataset"] = dataset_doc(dataset)
    doc["params"] = {
        "n_trees": params.n_trees,
        "max_depth": params.max_depth,
        "min_samples_split": params.min_samples_split,
        "features_per_split": params.features_per_split,
        "bootstrap": params.bootstrap,
        "seed": params.seed,
        "test_fraction": params.test_fraction,
    }
    out = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    if args.output:
        Path(args.output).write_text(out)
    else:
        print(out)
    return 0


def cmd_distances(args) -> int:
    session = _load_session(args.forest)
    matrix = session.matrix()
    lines = [" ".join(repr(float(v)) for v in row) for row in matrix]
    text = "\n".join(lines) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_cluster(args) -> int:
    session = _load_session(args.forest)
    curve = session.cluster_curve()
    m = args.min_size if args.min_size is not None else curve.default_m
    clustering = session.clustering(m)
    out = [f"min_cluster_size {m}", f"clusters {clustering.n_clusters}"]
    for cid, members in enumerate(clustering.clusters):
        out.append(
            f"cluster {cid} size {len(members)} medoid {clustering.medoids[cid]} "
            f"members {','.join(str(t) for t in members)}"
        )
    out.append("curve " + " ".join(f"{mm}:{c}" for mm, c in curve.samples))
    out.append(f"default_m {curve.default_m}")
    text = "\n".join(out) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_export(args) -> int:
    session = _load_session(args.forest)
    flt = _parse_filter_specs(args.filter or [], session.dataset)
    m = args.min_size if args.min_size is not None else session.cluster_curve().default_m
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "overview.json").write_bytes(payloads.canonical_json(payloads.overview_payload(session)))
    (outdir / "projection.json").write_bytes(
        payloads.canonical_json(payloads.projection_payload(session, m))
    )
    (outdir / "clusters.json").write_bytes(
        payloads.canonical_json(payloads.cluster_payloads(session, m, flt))
    )
    n_clusters = session.clustering(m).n_clusters
    for cid in range(n_clusters):
        (outdir / f"trees_{cid}.json").write_bytes(
            payloads.canonical_json(payloads.trees_payload(session, m, cid))
        )
    print(f"wrote payloads for {n_clusters} clusters to {outdir}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    host, _, port = args.addr.partition(":")
    app = create_app(data_dir=args.data_dir)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="forestmap")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a forest and write the interchange file")
    p.add_argument("csv", help="CSV path, or builtin name: glass / penguin")
    p.add_argument("--label", default=None, help="label column (default: last)")
    _add_train_params(p)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("distances", help="pairwise tree-distance matrix as text")
    p.add_argument("forest")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_distances)

    p = sub.add_parser("cluster", help="cluster assignment, medoids, and the size curve")
    p.add_argument("forest")
    p.add_argument("--min-size", type=int, default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("export", help="write all view-model payload documents")
    p.add_argument("forest")
    p.add_argument("--min-size", type=int, default=None)
    p.add_argument("--filter", action="append", help="feature:lo..hi or cell:TRUE->PRED")
    p.add_argument("-o", "--output", default="payloads")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--addr", default="127.0.0.1:8000")
    p.add_argument("--data-dir", default=None)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (IngestError, ForestImportError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
