"""Canonical JSON view-model payloads shared by the HTTP service and the CLI.

Everything is serialized through :func:`canonical_json` so that identical
requests produce byte-identical documents on every path.
"""
from __future__ import annotations

import json

import numpy as np

from .dataset import CATEGORICAL, QUANTITATIVE, TEST, TRAIN
from .stats import density_curve, histogram
from .treelayout import edge_geometry, layout_tree
from .viewmodel import (
    FeaturePlotData,
    FilterState,
    RulePlotData,
    feature_plot,
    filter_feature_plot,
    map_rules,
    rule_plot,
)

SCHEMA_OVERVIEW = "forestmap/overview@1"
SCHEMA_PROJECTION = "forestmap/projection@1"
SCHEMA_FEATURE_PLOT = "forestmap/feature-plot@1"
SCHEMA_RULE_PLOT = "forestmap/rule-plot@1"
SCHEMA_TREE_LAYOUT = "forestmap/tree-layout@1"

# Node box sizing policy: internal nodes are fixed-aspect density thumbnails,
# leaves get width from the class label text length.
INTERNAL_SIZE = (120.0, 60.0)
LEAF_HEIGHT = 28.0
LEAF_CHAR_WIDTH = 8.0


def canonical_json(payload) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()


def _floats(arr) -> list[float]:
    return [float(v) for v in arr]


def overview_payload(session) -> dict:
    ds = session.dataset
    distributions = []
    for f, meta in enumerate(ds.features):
        if meta.kind == QUANTITATIVE:
            curve = density_curve(ds.rows[:, f], feature=f)
            distributions.append(
                {
                    "feature": f,
                    "name": meta.name,
                    "kind": meta.kind,
                    "range": [meta.range[0], meta.range[1]],
                    "grid": _floats(curve.grid),
                    "density": _floats(curve.density),
                    "bandwidth": curve.bandwidth,
                }
            )
        else:
            counts = histogram(ds.rows[:, f], len(meta.category_names))
            distributions.append(
                {
                    "feature": f,
                    "name": meta.name,
                    "kind": meta.kind,
                    "range": [meta.range[0], meta.range[1]],
                    "categories": list(meta.category_names),
                    "counts": [int(c) for c in counts],
                }
            )
    confusion = session.confusion()
    curve = session.cluster_curve()
    return {
        "schema": SCHEMA_OVERVIEW,
        "dataset": {
            "name": ds.name,
            "classes": list(ds.classes),
            "n_rows": ds.n_rows,
            "n_train": int(np.count_nonzero(ds.split == TRAIN)),
            "n_test": int(np.count_nonzero(ds.split == TEST)),
        },
        "distributions": distributions,
        "confusion": {
            "counts": [[int(c) for c in row] for row in confusion.counts],
            "accuracy": confusion.accuracy,
        },
        "cluster_curve": {
            "samples": [[m, c] for m, c in curve.samples],
            "default_m": curve.default_m,
        },
        "n_trees": session.forest.n_trees,
    }


def projection_payload(session, m: int) -> dict:
    from .projection import convex_hull, mds

    clustering = session.clustering(m)
    coords = mds(session.matrix(), 2)
    hulls = []
    for cid, members in enumerate(clustering.clusters):
        pts = coords[members]
        hull_idx = convex_hull(pts)
        hulls.append({"cluster": cid, "vertices": [members[i] for i in hull_idx]})
    return {
        "schema": SCHEMA_PROJECTION,
        "m": m,
        "points": [{"tree": i, "x": float(x), "y": float(y)} for i, (x, y) in enumerate(coords)],
        "labels": [int(v) for v in clustering.labels],
        "hulls": hulls,
        "medoids": [int(v) for v in clustering.medoids],
    }


def _feature_plot_dict(data: FeaturePlotData) -> dict:
    return {
        "schema": SCHEMA_FEATURE_PLOT,
        "cluster": data.cluster_id,
        "max_depth": data.max_depth,
        "levels": [
            [
                {
                    "feature": c.feature,
                    "proportion": c.proportion,
                    "active_fraction": c.active_fraction,
                }
                for c in row
            ]
            for row in data.levels
        ],
    }


def _rule_plot_dict(data: RulePlotData) -> dict:
    return {
        "schema": SCHEMA_RULE_PLOT,
        "cluster": data.cluster_id,
        "representative": data.representative,
        "columns": [
            {
                "rep_leaf": col.rep_leaf,
                "predicted_class": col.predicted_class,
                "width_scale": col.width_scale,
                "visible": col.visible,
                "mapped_count": col.mapped_count,
                "visible_count": col.visible_count,
                "coverage": [
                    {"breaks": _floats(breaks), "values": _floats(values)}
                    for breaks, values in col.coverage
                ],
                "confusion": {str(k): v for k, v in sorted(col.confusion.items())},
            }
            for col in data.columns
        ],
        "unmapped_count": data.unmapped_count,
        "unmapped_confusion": {str(k): v for k, v in sorted(data.unmapped_confusion.items())},
    }


def cluster_payloads(session, m: int, flt: FilterState) -> dict:
    clustering = session.clustering(m)
    out = []
    for cid, members in enumerate(clustering.clusters):
        if flt.empty:
            fp = feature_plot(session.forest, members, cid)
        else:
            fp = filter_feature_plot(session.forest, members, flt, cid)
        mapping = map_rules(session.forest, members, clustering.medoids[cid], session.rules_by_tree(), cid)
        rp = rule_plot(mapping, session.forest, flt)
        out.append(
            {
                "cluster": cid,
                "size": len(members),
                "members": members,
                "medoid": clustering.medoids[cid],
                "feature_plot": _feature_plot_dict(fp),
                "rule_plot": _rule_plot_dict(rp),
            }
        )
    return {"m": m, "clusters": out}


def node_sizes(tree, classes) -> dict[int, tuple[float, float]]:
    sizes = {}
    for nid, node in enumerate(tree.nodes):
        if node.is_leaf:
            label = classes[node.predicted_class]
            sizes[nid] = (max(40.0, LEAF_CHAR_WIDTH * len(label)), LEAF_HEIGHT)
        else:
            sizes[nid] = INTERNAL_SIZE
    return sizes


def tree_layout_payload(session, tree) -> dict:
    ds = session.dataset
    layout = layout_tree(tree, node_sizes(tree, ds.classes))
    edges = edge_geometry(layout, tree, ds, session.bandwidth_cache)
    nodes = []
    for nid, node in enumerate(tree.nodes):
        box = layout.boxes[nid]
        entry = {
            "id": nid,
            "x": box.x,
            "y": box.y,
            "width": box.width,
            "height": box.height,
            "depth": box.depth,
            "train_count": node.train_count,
            "test_count": node.test_count,
        }
        if node.is_leaf:
            entry["kind"] = "leaf"
            entry["predicted_class"] = node.predicted_class
            entry["test_confusion"] = {str(k): v for k, v in sorted(node.test_confusion.items())}
        else:
            entry["kind"] = "split"
            entry["feature"] = node.feature
            entry["threshold"] = node.threshold
            entry["anchor_x"] = layout.anchors[nid]
            lo, hi = layout.active_intervals[nid]
            entry["active_interval"] = [lo, hi]
            gmin, gmax = ds.feature_range(node.feature)
            gray = []
            if lo > gmin:
                gray.append([gmin, lo])
            if hi < gmax:
                gray.append([hi, gmax])
            entry["gray_intervals"] = gray
        nodes.append(entry)
    correct_train = sum(
        tree.nodes[leaf].train_class_counts[tree.nodes[leaf].predicted_class]
        for leaf in tree.leaves()
    )
    correct_test = sum(
        tree.nodes[leaf].test_confusion.get(tree.nodes[leaf].predicted_class, 0)
        for leaf in tree.leaves()
    )
    n_train = int(np.count_nonzero(ds.split == TRAIN))
    n_test = int(np.count_nonzero(ds.split == TEST))
    return {
        "schema": SCHEMA_TREE_LAYOUT,
        "tree": tree.tree_index,
        "train_accuracy": float(correct_train / n_train) if n_train else 0.0,
        "test_accuracy": float(correct_test / n_test) if n_test else 0.0,
        "nodes": nodes,
        "edges": [
            {
                "parent": e.parent,
                "child": e.child,
                "bezier": [[float(x), float(y)] for x, y in e.bezier],
                "thickness": e.thickness,
                "dominant_class": e.dominant_class,
            }
            for e in edges
        ],
    }


def trees_payload(session, m: int, cluster: int) -> dict:
    clustering = session.clustering(m)
    if not 0 <= cluster < clustering.n_clusters:
        raise KeyError(f"unknown cluster {cluster}")
    members = clustering.clusters[cluster]
    rep = clustering.medoids[cluster]
    ordered = [rep] + [t for t in members if t != rep]
    return {
        "m": m,
        "cluster": cluster,
        "representative": rep,
        "layouts": [tree_layout_payload(session, session.forest.trees[t]) for t in ordered],
    }
