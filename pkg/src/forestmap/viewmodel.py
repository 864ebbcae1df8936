"""Feature Plot / Rule Plot payloads and the linked filtering semantics."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset
from .forest import Forest, Rule
from .metric import rule_distance
from .projection import mds

WIDTH_CAP = 10.0


@dataclass(frozen=True)
class FilterState:
    """Per-feature raw-unit ranges plus selected (true, predicted) confusion cells."""

    ranges: tuple[tuple[int, float, float], ...] = ()
    cells: frozenset[tuple[int, int]] = frozenset()

    def validate(self, dataset: Dataset) -> None:
        for f, lo, hi in self.ranges:
            if not 0 <= f < dataset.n_features:
                raise ValueError(f"filter references unknown feature {f}")
            if lo > hi:
                raise ValueError(f"filter range for feature {f} has lo > hi")
        for t, p in self.cells:
            if not (0 <= t < dataset.n_classes and 0 <= p < dataset.n_classes):
                raise ValueError("filter cell index out of range")

    @property
    def empty(self) -> bool:
        return not self.ranges and not self.cells


def filter_from_doc(doc: dict | None) -> FilterState:
    """Build a canonical FilterState from {"ranges": [[f, lo, hi]...], "cells": [[t, p]...]}."""
    if not doc:
        return FilterState()
    ranges = tuple(
        sorted((int(f), float(lo), float(hi)) for f, lo, hi in doc.get("ranges", []))
    )
    cells = frozenset((int(t), int(p)) for t, p in doc.get("cells", []))
    return FilterState(ranges, cells)


@dataclass
class FeaturePlotCell:
    feature: int
    proportion: float
    active_fraction: float


@dataclass
class FeaturePlotData:
    cluster_id: int
    levels: list[list[FeaturePlotCell]]  # one row per level with internal nodes
    max_depth: int


@dataclass
class RuleColumn:
    rep_leaf: int
    predicted_class: int
    width_scale: float
    visible: bool
    mapped_count: int
    visible_count: int
    # per feature: (breakpoints in normalized [0,1], piecewise-constant values)
    coverage: list[tuple[list[float], list[float]]]
    confusion: dict[int, int]  # true class -> test count over visible mapped leaves


@dataclass
class RulePlotData:
    cluster_id: int
    representative: int
    columns: list[RuleColumn]  # display order; equal-class columns contiguous
    unmapped_count: int
    unmapped_confusion: dict[int, int]


@dataclass
class RuleMapping:
    cluster_id: int
    representative: int
    columns: list[tuple[Rule, list[Rule]]]  # (representative rule, mapped rules)
    unmapped: list[Rule] = field(default_factory=list)


# ---------------------------------------------------------------------------
# Filtering
# ---------------------------------------------------------------------------

def _ranges_admit(lower: np.ndarray, upper: np.ndarray, flt: FilterState) -> bool:
    """Clause (a): every filtered feature range intersects the rule interval."""
    for f, lo, hi in flt.ranges:
        if upper[f] < lo or lower[f] > hi:
            return False
    return True


def _cells_admit(confusion: dict[int, int], predicted: int, flt: FilterState) -> bool:
    """Clause (b): the leaf confusion holds a count in some selected cell."""
    if not flt.cells:
        return True
    for true, pred in flt.cells:
        if pred == predicted and confusion.get(true, 0) > 0:
            return True
    return False


def filter_rules(rules: list[Rule], flt: FilterState, forest: Forest) -> list[bool]:
    """Visibility per rule; an empty filter keeps everything visible."""
    out = []
    for r in rules:
        leaf = forest.trees[r.tree_index].nodes[r.leaf]
        out.append(
            _ranges_admit(r.lower, r.upper, flt)
            and _cells_admit(leaf.test_confusion, r.predicted_class, flt)
        )
    return out


# ---------------------------------------------------------------------------
# Feature Plot
# ---------------------------------------------------------------------------

def _level_feature_counts(forest: Forest, members: list[int]):
    """counts[(level, feature)] of internal nodes across the cluster's trees."""
    counts: dict[tuple[int, int], int] = {}
    max_depth = 0
    for t in members:
        tree = forest.trees[t]
        stack = [(tree.root, 0)]
        while stack:
            nid, depth = stack.pop()
            node = tree.nodes[nid]
            if node.is_leaf:
                max_depth = max(max_depth, depth)
                continue
            counts[(depth, node.feature)] = counts.get((depth, node.feature), 0) + 1
            stack.append((node.right, depth + 1))
            stack.append((node.left, depth + 1))
    return counts, max_depth


def feature_plot(forest: Forest, members: list[int], cluster_id: int = 0) -> FeaturePlotData:
    """Per-level feature-usage proportions over the cluster's internal nodes."""
    if not members:
        raise ValueError("empty cluster")
    counts, max_depth = _level_feature_counts(forest, members)
    n_levels = max((lvl for lvl, _ in counts), default=-1) + 1
    levels = []
    for lvl in range(n_levels):
        total = sum(c for (l, _), c in counts.items() if l == lvl)
        row = [
            FeaturePlotCell(f, counts[(lvl, f)] / total, 1.0)
            for f in range(forest.dataset.n_features)
            if (lvl, f) in counts
        ]
        levels.append(row)
    return FeaturePlotData(cluster_id, levels, max_depth)


def filter_feature_plot(
    forest: Forest, members: list[int], flt: FilterState, cluster_id: int = 0
) -> FeaturePlotData:
    """Feature Plot with active fractions under the filter.

    A node is active when its root-prefix rule intersects all filtered ranges
    and some descendant leaf carries a selected (mis)classification.
    """
    data = feature_plot(forest, members, cluster_id)
    dataset = forest.dataset
    active: dict[tuple[int, int], int] = {}
    totals: dict[tuple[int, int], int] = {}
    for t in members:
        tree = forest.trees[t]

        def leaf_passes(nid: int) -> bool:
            node = tree.nodes[nid]
            if node.is_leaf:
                return _cells_admit(node.test_confusion, node.predicted_class, flt)
            return leaf_passes(node.left) or leaf_passes(node.right)

        lo = np.array([m.range[0] for m in dataset.features])
        hi = np.array([m.range[1] for m in dataset.features])

        def walk(nid: int, depth: int, prefix_ok: bool) -> None:
            node = tree.nodes[nid]
            if node.is_leaf:
                return
            key = (depth, node.feature)
            totals[key] = totals.get(key, 0) + 1
            if prefix_ok and leaf_passes(nid):
                active[key] = active.get(key, 0) + 1
            f, thr = node.feature, node.threshold
            saved_hi = hi[f]
            hi[f] = min(hi[f], thr)
            walk(node.left, depth + 1, prefix_ok and _ranges_admit(lo, hi, flt))
            hi[f] = saved_hi
            saved_lo = lo[f]
            lo[f] = max(lo[f], thr)
            walk(node.right, depth + 1, prefix_ok and _ranges_admit(lo, hi, flt))
            lo[f] = saved_lo

        walk(tree.root, 0, _ranges_admit(lo, hi, flt))
    for lvl, row in enumerate(data.levels):
        for cell in row:
            key = (lvl, cell.feature)
            cell.active_fraction = active.get(key, 0) / totals[key]
    return data


# ---------------------------------------------------------------------------
# Rule mapping and Rule Plot
# ---------------------------------------------------------------------------

def map_rules(
    forest: Forest,
    members: list[int],
    representative: int,
    rules_by_tree: dict[int, list[Rule]],
    cluster_id: int = 0,
) -> RuleMapping:
    """Map every cluster rule to its nearest same-class representative rule.

    The representative's own rules map to themselves; ties elsewhere go to the
    representative rule with the lowest leaf id. Rules whose class is absent
    from the representative land in the unmapped remainder.
    """
    rep_rules = rules_by_tree[representative]
    columns: list[tuple[Rule, list[Rule]]] = [(r, []) for r in rep_rules]
    by_leaf = {r.leaf: i for i, r in enumerate(rep_rules)}
    unmapped: list[Rule] = []
    for t in members:
        for rule in rules_by_tree[t]:
            if t == representative:
                columns[by_leaf[rule.leaf]][1].append(rule)
                continue
            best = None
            for i, rep in enumerate(rep_rules):
                if rep.predicted_class != rule.predicted_class:
                    continue
                d = rule_distance(rule, rep)
                if best is None or d < best[0]:
                    best = (d, i)
            if best is None:
                unmapped.append(rule)
            else:
                columns[best[1]][1].append(rule)
    return RuleMapping(cluster_id, representative, columns, unmapped)


def _coverage(
    intervals: list[tuple[float, float]], denominator: int
) -> tuple[list[float], list[float]]:
    """Piecewise-constant stabbing counts of normalized intervals over [0,1]."""
    breaks = sorted({0.0, 1.0, *(a for a, _ in intervals), *(b for _, b in intervals)})
    breaks = [b for b in breaks if 0.0 <= b <= 1.0]
    values = []
    for i in range(len(breaks) - 1):
        mid = (breaks[i] + breaks[i + 1]) / 2.0
        count = sum(1 for a, b in intervals if a <= mid <= b)
        values.append(count / denominator if denominator else 0.0)
    return breaks, values


def _column_order(rep_rules: list[Rule]) -> list[int]:
    """1-D embedding order with cross-class distances forced to 1, then a stable
    partition keeping equal-class columns contiguous by first appearance."""
    n = len(rep_rules)
    if n == 0:
        return []
    D = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            if rep_rules[i].predicted_class != rep_rules[j].predicted_class:
                d = 1.0
            else:
                d = rule_distance(rep_rules[i], rep_rules[j])
            D[i, j] = D[j, i] = d
    x = mds(D, 1)[:, 0]
    order = sorted(range(n), key=lambda i: (x[i], rep_rules[i].leaf))
    seen: list[int] = []
    for i in order:
        if rep_rules[i].predicted_class not in seen:
            seen.append(rep_rules[i].predicted_class)
    return sorted(order, key=lambda i: seen.index(rep_rules[i].predicted_class))


def rule_plot(
    mapping: RuleMapping, forest: Forest, flt: FilterState | None = None
) -> RulePlotData:
    """Rule Plot payload: coverage heatmap data, widths, confusion bars.

    Coverage denominators stay fixed to the unfiltered mapped-rule counts, so
    hiding rules never re-normalizes the remaining columns.
    """
    flt = flt or FilterState()
    dataset = forest.dataset
    counts = []
    for _, mapped in mapping.columns:
        counts.append(
            sum(forest.trees[r.tree_index].nodes[r.leaf].test_count for r in mapped)
        )
    nonzero = [c for c in counts if c > 0]
    mean_count = sum(nonzero) / len(nonzero) if nonzero else 0.0

    columns = []
    for (rep, mapped), count in zip(mapping.columns, counts):
        flags = filter_rules(mapped, flt, forest)
        visible_rules = [r for r, ok in zip(mapped, flags) if ok]
        coverage = []
        for f in range(dataset.n_features):
            gmin, gmax = dataset.feature_range(f)
            span = gmax - gmin
            ivals = []
            for r in visible_rules:
                if span > 0:
                    ivals.append(((r.lower[f] - gmin) / span, (r.upper[f] - gmin) / span))
                else:
                    ivals.append((0.0, 1.0))
            coverage.append(_coverage(ivals, len(mapped)))
        confusion: dict[int, int] = {}
        for r in visible_rules:
            for true, c in forest.trees[r.tree_index].nodes[r.leaf].test_confusion.items():
                confusion[true] = confusion.get(true, 0) + c
        width = min(WIDTH_CAP, max(1.0, count / mean_count)) if mean_count > 0 else 1.0
        columns.append(
            RuleColumn(
                rep_leaf=rep.leaf,
                predicted_class=rep.predicted_class,
                width_scale=width,
                visible=bool(visible_rules),
                mapped_count=len(mapped),
                visible_count=len(visible_rules),
                coverage=coverage,
                confusion=confusion,
            )
        )
    order = _column_order([rep for rep, _ in mapping.columns])
    columns = [columns[i] for i in order]
    unmapped_confusion: dict[int, int] = {}
    for r in mapping.unmapped:
        for true, c in forest.trees[r.tree_index].nodes[r.leaf].test_confusion.items():
            unmapped_confusion[true] = unmapped_confusion.get(true, 0) + c
    return RulePlotData(
        mapping.cluster_id, mapping.representative, columns, len(mapping.unmapped), unmapped_confusion
    )
