"""Geometry for the node-link tree view: tidy layout, anchors, flow edges."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset
from .forest import DecisionTree
from .stats import DensityCurve, density_curve

H_GAP = 10.0
V_GAP = 40.0
MIN_THICKNESS = 0.01


@dataclass
class NodeBox:
    x: float  # center
    y: float  # top
    width: float
    height: float
    depth: int


@dataclass
class EdgeGeom:
    parent: int
    child: int
    bezier: list[tuple[float, float]]  # 4 cubic control points
    thickness: float
    dominant_class: int


@dataclass
class TreeLayout:
    tree_index: int
    boxes: dict[int, NodeBox]
    anchors: dict[int, float]  # internal node -> split anchor x
    active_intervals: dict[int, tuple[float, float]]  # internal node -> split feature interval
    edges: list[EdgeGeom] = field(default_factory=list)


def layout_tree(tree: DecisionTree, sizes: dict[int, tuple[float, float]]) -> TreeLayout:
    """Tidy layout for variable-size boxes via post-order contour merging."""
    for nid, (w, h) in sizes.items():
        if w <= 0 or h <= 0:
            raise ValueError(f"node {nid}: sizes must be positive")
    positions: dict[int, float] = {}
    depths: dict[int, int] = {}

    def build(nid: int, depth: int):
        """Returns (x offsets relative to subtree origin, left contour, right contour)."""
        depths[nid] = depth
        w = sizes[nid][0]
        node = tree.nodes[nid]
        if node.is_leaf:
            return {nid: 0.0}, {depth: -w / 2}, {depth: w / 2}
        lx, llc, lrc = build(node.left, depth + 1)
        rx, rlc, rrc = build(node.right, depth + 1)
        shift = max(
            (lrc[d] + H_GAP - rlc[d] for d in lrc if d in rlc),
            default=0.0,
        )
        xs = dict(lx)
        for k, v in rx.items():
            xs[k] = v + shift
        center = (xs[node.left] + xs[node.right]) / 2.0
        xs = {k: v - center for k, v in xs.items()}
        left = {depth: -w / 2}
        right = {depth: w / 2}
        for d in set(llc) | set(rlc):
            cands = []
            if d in llc:
                cands.append(llc[d] - center)
            if d in rlc:
                cands.append(rlc[d] + shift - center)
            left[d] = min(cands)
        for d in set(lrc) | set(rrc):
            cands = []
            if d in lrc:
                cands.append(lrc[d] - center)
            if d in rrc:
                cands.append(rrc[d] + shift - center)
            right[d] = max(cands)
        left[depth] = min(left.get(depth, -w / 2), -w / 2)
        right[depth] = max(right.get(depth, w / 2), w / 2)
        xs[nid] = 0.0
        return xs, left, right

    xs, left, _ = build(tree.root, 0)
    x_shift = -min(left.values())
    row_height: dict[int, float] = {}
    for nid, d in depths.items():
        row_height[d] = max(row_height.get(d, 0.0), sizes[nid][1])
    row_top: dict[int, float] = {}
    y = 0.0
    for d in sorted(row_height):
        row_top[d] = y
        y += row_height[d] + V_GAP
    boxes = {
        nid: NodeBox(xs[nid] + x_shift, row_top[depths[nid]], sizes[nid][0], sizes[nid][1], depths[nid])
        for nid in xs
    }
    return TreeLayout(tree.tree_index, boxes, {}, {})


def active_split_interval(tree: DecisionTree, nid: int, dataset: Dataset) -> tuple[float, float]:
    """Intersection of ancestor constraints on this node's split feature."""
    node = tree.nodes[nid]
    if node.is_leaf:
        raise ValueError("leaves have no split feature")
    f = node.feature
    lo, hi = dataset.feature_range(f)
    path = _path_to(tree, nid)
    for parent, went_left in path:
        pnode = tree.nodes[parent]
        if pnode.feature != f:
            continue
        if went_left:
            hi = min(hi, pnode.threshold)
        else:
            lo = max(lo, pnode.threshold)
    return lo, hi


def _path_to(tree: DecisionTree, target: int) -> list[tuple[int, bool]]:
    path: list[tuple[int, bool]] = []

    def rec(nid: int) -> bool:
        if nid == target:
            return True
        node = tree.nodes[nid]
        if node.is_leaf:
            return False
        path.append((nid, True))
        if rec(node.left):
            return True
        path[-1] = (nid, False)
        if rec(node.right):
            return True
        path.pop()
        return False

    rec(tree.root)
    return path


def node_content(
    tree: DecisionTree, nid: int, dataset: Dataset
) -> tuple[DensityCurve, float, tuple[float, float], list[tuple[float, float]]]:
    """Density of the split feature over all rows, the split point, the active
    interval under ancestor constraints, and the grayed-out complement."""
    node = tree.nodes[nid]
    f = node.feature
    curve = density_curve(dataset.rows[:, f], feature=f)
    lo, hi = active_split_interval(tree, nid, dataset)
    gmin, gmax = dataset.feature_range(f)
    gray = []
    if lo > gmin:
        gray.append((gmin, lo))
    if hi < gmax:
        gray.append((hi, gmax))
    return curve, node.threshold, (lo, hi), gray


def edge_geometry(
    layout: TreeLayout,
    tree: DecisionTree,
    dataset: Dataset,
    bandwidths: dict[int, float] | None = None,
) -> list[EdgeGeom]:
    """Cubic Bézier flow edges from split anchors to child tops.

    Thickness is routed samples (train + test) normalized by the maximum at the
    child's depth, floored at a minimum unit; color class is the plurality of
    routed training samples.
    """
    if bandwidths is None:
        bandwidths = {}
    for nid, node in enumerate(tree.nodes):
        if node.is_leaf or nid not in layout.boxes:
            continue
        box = layout.boxes[nid]
        gmin, gmax = dataset.feature_range(node.feature)
        if node.feature not in bandwidths:
            bandwidths[node.feature] = density_curve(dataset.rows[:, node.feature]).bandwidth
        h = bandwidths[node.feature]
        span = (gmax + h) - (gmin - h)
        rel = (node.threshold - (gmin - h)) / span if span > 0 else 0.5
        anchor = box.x - box.width / 2 + rel * box.width
        layout.anchors[nid] = min(max(anchor, box.x - box.width / 2), box.x + box.width / 2)
        layout.active_intervals[nid] = active_split_interval(tree, nid, dataset)

    max_at_depth: dict[int, int] = {}
    for nid, node in enumerate(tree.nodes):
        if node.is_leaf:
            continue
        for child in (node.left, node.right):
            d = layout.boxes[child].depth
            routed = tree.nodes[child].train_count + tree.nodes[child].test_count
            max_at_depth[d] = max(max_at_depth.get(d, 0), routed)

    edges = []
    for nid, node in enumerate(tree.nodes):
        if node.is_leaf:
            continue
        pbox = layout.boxes[nid]
        start = (layout.anchors[nid], pbox.y + pbox.height)
        for child in (node.left, node.right):
            cbox = layout.boxes[child]
            end = (cbox.x, cbox.y)
            mid_y = (start[1] + end[1]) / 2.0
            cnode = tree.nodes[child]
            routed = cnode.train_count + cnode.test_count
            peak = max_at_depth[cbox.depth]
            thickness = max(MIN_THICKNESS, routed / peak) if peak else MIN_THICKNESS
            edges.append(
                EdgeGeom(
                    parent=nid,
                    child=child,
                    bezier=[start, (start[0], mid_y), (end[0], mid_y), end],
                    thickness=thickness,
                    dominant_class=int(np.argmax(cnode.train_class_counts)),
                )
            )
    layout.edges = edges
    return edges
