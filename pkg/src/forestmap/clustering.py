"""Complete-linkage dendrogram, dynamic-hybrid-style cutting, medoids, cluster curve."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

CUT_QUANTILE = 0.99
GAP_FRACTION = 0.05


@dataclass(frozen=True)
class Merge:
    left: int
    right: int
    height: float
    size: int


@dataclass
class Dendrogram:
    """Scipy-style merge list: leaves are 0..n-1, merge k creates node n+k."""

    merges: list[Merge]
    n: int

    def heights(self) -> list[float]:
        return [m.height for m in self.merges]


@dataclass
class Clustering:
    min_cluster_size: int
    labels: np.ndarray  # (n,) cluster id per tree
    clusters: list[list[int]]  # ordered by descending size
    medoids: list[int]

    @property
    def n_clusters(self) -> int:
        return len(self.clusters)


@dataclass
class ClusterCurve:
    samples: list[tuple[int, int]]  # (min size m, cluster count)
    default_m: int


def complete_linkage(matrix: np.ndarray) -> Dendrogram:
    """Agglomerative complete linkage; ties broken by the smallest (i, j) pair."""
    n = matrix.shape[0]
    if n == 0:
        raise ValueError("empty distance matrix")
    active: dict[int, list[int]] = {i: [i] for i in range(n)}
    dist: dict[tuple[int, int], float] = {}
    for i in range(n):
        for j in range(i + 1, n):
            dist[(i, j)] = float(matrix[i, j])
    merges: list[Merge] = []
    next_id = n
    while len(active) > 1:
        ids = sorted(active)
        best = None
        for a in range(len(ids)):
            for b in range(a + 1, len(ids)):
                key = (ids[a], ids[b])
                d = dist[key]
                if best is None or d < best[0]:
                    best = (d, key)
        d, (i, j) = best
        members = active[i] + active[j]
        for k in active:
            if k in (i, j):
                continue
            lo_i, hi_i = min(i, k), max(i, k)
            lo_j, hi_j = min(j, k), max(j, k)
            dk = max(dist[(lo_i, hi_i)], dist[(lo_j, hi_j)])
            dist[(min(k, next_id), max(k, next_id))] = dk
        del active[i], active[j]
        active[next_id] = members
        merges.append(Merge(i, j, d, len(members)))
        next_id += 1
    return Dendrogram(merges, n)


def _quantile_type7(values: list[float], q: float) -> float:
    return float(np.quantile(np.array(values), q))  # numpy default is type-7


class _Tree:
    """Binary dendrogram node used for cutting."""

    __slots__ = ("height", "left", "right", "leaf", "parent_height")

    def __init__(self, leaf=None, left=None, right=None, height=0.0):
        self.leaf = leaf
        self.left = left
        self.right = right
        self.height = height
        self.parent_height = None

    @property
    def is_leaf(self):
        return self.leaf is not None

    def leaves(self) -> list[int]:
        if self.is_leaf:
            return [self.leaf]
        return self.left.leaves() + self.right.leaves()

    def internal_heights(self) -> list[float]:
        if self.is_leaf:
            return []
        return [self.height] + self.left.internal_heights() + self.right.internal_heights()


def _build_tree(dendrogram: Dendrogram) -> _Tree:
    nodes: dict[int, _Tree] = {i: _Tree(leaf=i) for i in range(dendrogram.n)}
    nid = dendrogram.n
    for m in dendrogram.merges:
        node = _Tree(left=nodes.pop(m.left), right=nodes.pop(m.right), height=m.height)
        node.left.parent_height = m.height
        node.right.parent_height = m.height
        nodes[nid] = node
        nid += 1
    (root,) = nodes.values()
    return root


def _cut_branches(node: _Tree, h0: float) -> list[_Tree]:
    """Maximal subtrees whose merge heights are all <= h0."""
    if node.is_leaf or node.height <= h0:
        return [node]
    return _cut_branches(node.left, h0) + _cut_branches(node.right, h0)


def medoid(members: list[int], matrix: np.ndarray) -> int:
    """Member minimizing summed distance to the other members; ties -> lowest index."""
    if not members:
        raise ValueError("empty cluster")
    best = None
    for i in members:
        s = 0.0
        for j in members:
            s += float(matrix[i, j])
        if best is None or s < best[0]:
            best = (s, i)
    return best[1]


def dynamic_hybrid_cut(dendrogram: Dendrogram, matrix: np.ndarray, m: int) -> Clustering:
    """Branch-local dendrogram cut with minimum cluster size m and total assignment.

    Stage 1: static cut at the 0.99 height quantile. Stage 2: branches of size
    >= 2m are recursively re-cut, accepting a split only when every part has
    size >= m and joins the rest at a height exceeding its own internal maximum
    by at least 0.05 of the global height span. Stage 3: undersized branches are
    dissolved onto the nearest surviving medoid. Stage 4: renumber by size.
    """
    if m < 1:
        raise ValueError("minimum cluster size must be >= 1")
    n = dendrogram.n
    if n == 1 or not dendrogram.merges:
        return Clustering(m, np.zeros(n, dtype=np.int64), [list(range(n))], [0] if n else [])
    heights = dendrogram.heights()
    gap = GAP_FRACTION * (max(heights) - min(heights))
    root = _build_tree(dendrogram)
    h0 = _quantile_type7(heights, CUT_QUANTILE)
    branches = _cut_branches(root, h0)

    def refine(branch: _Tree) -> list[_Tree]:
        size = len(branch.leaves())
        if branch.is_leaf or size < 2 * m:
            return [branch]
        sub_heights = branch.internal_heights()
        h_cut = _quantile_type7(sub_heights, CUT_QUANTILE)
        parts = _cut_branches(branch, h_cut)
        if len(parts) == 1:
            return [branch]
        for part in parts:
            if len(part.leaves()) < m:
                return [branch]
            internal_max = 0.0 if part.is_leaf else max(part.internal_heights())
            if part.parent_height - internal_max < gap:
                return [branch]
        out: list[_Tree] = []
        for part in parts:
            out.extend(refine(part))
        return out

    final: list[list[int]] = []
    for branch in branches:
        for part in refine(branch):
            final.append(sorted(part.leaves()))

    survivors = [c for c in final if len(c) >= m]
    leftovers = [c for c in final if len(c) < m]
    if not survivors:
        survivors = [sorted(i for c in final for i in c)]
        leftovers = []
    medoids = [medoid(c, matrix) for c in survivors]
    assigned = [list(c) for c in survivors]
    for c in leftovers:
        for tree in c:
            best = None
            for k, med in enumerate(medoids):
                d = float(matrix[tree, med])
                if best is None or d < best[0]:
                    best = (d, k)
            assigned[best[1]].append(tree)
    assigned = [sorted(c) for c in assigned]
    order = sorted(range(len(assigned)), key=lambda k: (-len(assigned[k]), assigned[k][0]))
    clusters = [assigned[k] for k in order]
    medoids = [medoid(c, matrix) for c in clusters]
    labels = np.zeros(n, dtype=np.int64)
    for cid, members in enumerate(clusters):
        for i in members:
            labels[i] = cid
    return Clustering(m, labels, clusters, medoids)


def cluster_curve(
    dendrogram: Dendrogram,
    matrix: np.ndarray,
    cut=dynamic_hybrid_cut,
) -> ClusterCurve:
    """Cluster count for m = 2..n/2, plus the elbow-style default m.

    The knee is the m with the largest |slope change|; the default is the
    smallest later m where |slope change| is minimal.
    """
    n = dendrogram.n
    ms = list(range(2, n // 2 + 1))
    if not ms:
        ms = [2]
    counts = [cut(dendrogram, matrix, m).n_clusters for m in ms]
    samples = list(zip(ms, counts))
    if n < 6 or len(ms) < 3:
        return ClusterCurve(samples, 2)
    slope = [counts[i + 1] - counts[i] for i in range(len(ms) - 1)]
    curv = [slope[i + 1] - slope[i] for i in range(len(slope) - 1)]
    knee_i = max(range(len(curv)), key=lambda i: (abs(curv[i]), -i))
    after = [i for i in range(len(curv)) if i > knee_i]
    if after:
        best_i = min(after, key=lambda i: (abs(curv[i]), i))
        default_m = ms[best_i]
    else:
        default_m = min(ms[knee_i] + 1, ms[-1])
    return ClusterCurve(samples, default_m)
