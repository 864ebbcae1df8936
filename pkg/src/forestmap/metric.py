"""Rule/interval distance between decision trees and the pairwise matrix.

The scalar functions are the reference definitions; ``distance_matrix`` uses a
vectorized kernel whose reductions run in the same left-to-right order, so both
paths produce bit-identical floats.
"""
from __future__ import annotations

import numpy as np

from .forest import Forest, Rule, extract_rules


def interval_distance(i1: tuple[float, float], i2: tuple[float, float]) -> float:
    """1 - overlap / longer length; degenerate zero-length case is 0/1 by point equality."""
    a1, b1 = i1
    a2, b2 = i2
    inter = min(b1, b2) - max(a1, a2)
    if inter < 0.0:
        inter = 0.0
    longest = max(b1 - a1, b2 - a2)
    if longest > 0.0:
        return 1.0 - inter / longest
    return 0.0 if a1 == a2 else 1.0


def rule_distance(r1: Rule, r2: Rule) -> float:
    """Mean interval distance over all features. Class-agnostic by design."""
    if len(r1.lower) != len(r2.lower):
        raise ValueError("rules span different feature counts")
    total = 0.0
    for f in range(len(r1.lower)):
        total += interval_distance((r1.lower[f], r1.upper[f]), (r2.lower[f], r2.upper[f]))
    return total / len(r1.lower)


def tree_distance_directed(rules1: list[Rule], rules2: list[Rule]) -> float:
    """Average over rules of T1 of the nearest same-class rule in T2 (1 if none)."""
    if not rules1:
        raise ValueError("tree has no rules")
    total = 0.0
    for r1 in rules1:
        best = None
        for r2 in rules2:
            if r2.predicted_class != r1.predicted_class:
                continue
            d = rule_distance(r1, r2)
            if best is None or d < best:
                best = d
        total += 1.0 if best is None else best
    return total / len(rules1)


def tree_distance(rules1: list[Rule], rules2: list[Rule]) -> float:
    """Arithmetic-mean symmetrization of the directed distance."""
    return (tree_distance_directed(rules1, rules2) + tree_distance_directed(rules2, rules1)) / 2.0


def _rule_arrays(rules: list[Rule]):
    lo = np.stack([r.lower for r in rules])
    hi = np.stack([r.upper for r in rules])
    cls = np.array([r.predicted_class for r in rules])
    return lo, hi, cls


def _pair_rule_distance_matrix(lo1, hi1, lo2, hi2) -> np.ndarray:
    """(R1, R2) rule distances; feature reduction is an explicit ordered loop."""
    n_features = lo1.shape[1]
    acc = np.zeros((lo1.shape[0], lo2.shape[0]))
    for f in range(n_features):
        a1 = lo1[:, f][:, None]
        b1 = hi1[:, f][:, None]
        a2 = lo2[:, f][None, :]
        b2 = hi2[:, f][None, :]
        inter = np.maximum(np.minimum(b1, b2) - np.maximum(a1, a2), 0.0)
        longest = np.maximum(b1 - a1, b2 - a2)
        with np.errstate(divide="ignore", invalid="ignore"):
            d = np.where(longest > 0.0, 1.0 - inter / longest, np.where(a1 == a2, 0.0, 1.0))
        acc += d
    return acc / n_features


def _directed_from_matrix(dr: np.ndarray, cls1: np.ndarray, cls2: np.ndarray) -> float:
    masked = np.where(cls1[:, None] == cls2[None, :], dr, np.inf)
    mins = np.min(masked, axis=1)
    total = 0.0
    for v in mins:
        total += 1.0 if np.isinf(v) else float(v)
    return total / len(cls1)


def distance_matrix(forest: Forest, rules: list[list[Rule]] | None = None) -> np.ndarray:
    """Symmetrized tree-distance matrix over all tree pairs.

    Entries match the scalar ``tree_distance`` bit-for-bit.
    """
    if rules is None:
        rules = [extract_rules(t, forest.dataset) for t in forest.trees]
    n = len(rules)
    packed = [_rule_arrays(rs) for rs in rules]
    out = np.zeros((n, n))
    for i in range(n):
        lo1, hi1, c1 = packed[i]
        for j in range(i + 1, n):
            lo2, hi2, c2 = packed[j]
            dr = _pair_rule_distance_matrix(lo1, hi1, lo2, hi2)
            dij = _directed_from_matrix(dr, c1, c2)
            dji = _directed_from_matrix(dr.T, c2, c1)
            out[i, j] = out[j, i] = (dij + dji) / 2.0
    return out
