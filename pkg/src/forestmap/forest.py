"""Decision trees, random-forest training, rule extraction, and interchange."""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field

import numpy as np

from .dataset import DEFAULT_SEED, Dataset

LEAF = -1


class ForestImportError(ValueError):
    """Raised for malformed forest interchange documents."""


@dataclass
class Node:
    # Internal nodes: feature/threshold/left/right; leaves: predicted_class.
    feature: int = LEAF
    threshold: float = 0.0
    left: int = -1
    right: int = -1
    predicted_class: int = -1
    train_count: int = 0
    test_count: int = 0
    train_class_counts: np.ndarray | None = None
    test_confusion: dict[int, int] = field(default_factory=dict)  # true class -> count, leaves only

    @property
    def is_leaf(self) -> bool:
        return self.feature == LEAF


@dataclass
class DecisionTree:
    nodes: list[Node]
    root: int
    tree_index: int

    def leaves(self) -> list[int]:
        """Leaf ids in depth-first left-to-right order."""
        out: list[int] = []
        stack = [self.root]
        while stack:
            nid = stack.pop()
            node = self.nodes[nid]
            if node.is_leaf:
                out.append(nid)
            else:
                stack.append(node.right)
                stack.append(node.left)
        return out

    def apply(self, row: np.ndarray) -> int:
        """Leaf id the row is routed to."""
        nid = self.root
        while not self.nodes[nid].is_leaf:
            node = self.nodes[nid]
            nid = node.left if row[node.feature] <= node.threshold else node.right
        return nid

    def predict(self, row: np.ndarray) -> int:
        return self.nodes[self.apply(row)].predicted_class

    def depth(self) -> int:
        def rec(nid: int) -> int:
            node = self.nodes[nid]
            if node.is_leaf:
                return 0
            return 1 + max(rec(node.left), rec(node.right))

        return rec(self.root)


@dataclass(frozen=True)
class TrainParams:
    n_trees: int = 100
    max_depth: int | None = None
    min_samples_split: int = 2
    features_per_split: int | None = None  # default ceil(sqrt(F))
    bootstrap: bool = True
    seed: int = DEFAULT_SEED
    test_fraction: float = 0.3

    def validate(self) -> None:
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        if not 0.0 < self.test_fraction < 1.0:
            raise ValueError("test_fraction must be in (0, 1)")


@dataclass
class Rule:
    """A root-to-leaf path as one closed interval per feature plus a class."""

    tree_index: int
    leaf: int
    predicted_class: int
    lower: np.ndarray  # (F,)
    upper: np.ndarray  # (F,)


@dataclass
class Forest:
    trees: list[DecisionTree]
    params: TrainParams
    dataset: Dataset

    @property
    def n_trees(self) -> int:
        return len(self.trees)


def _gini(counts: np.ndarray, n: int) -> float:
    if n == 0:
        return 0.0
    p = counts / n
    return 1.0 - float(np.dot(p, p))


def _best_split(X, y, idx, feats, n_classes):
    """Best (gain, feature, threshold) over midpoint candidates.

    Features ascending and thresholds ascending with strict improvement, so
    ties resolve to the lowest feature and lowest threshold.
    """
    n = len(idx)
    counts = np.bincount(y[idx], minlength=n_classes).astype(np.float64)
    parent = _gini(counts, n)
    best = (0.0, -1, 0.0)
    for f in feats:
        xs = X[idx, f]
        order = np.argsort(xs, kind="stable")
        xs_sorted = xs[order]
        ys_sorted = y[idx][order]
        onehot = np.zeros((n, n_classes))
        onehot[np.arange(n), ys_sorted] = 1.0
        prefix = np.cumsum(onehot, axis=0)
        boundaries = np.flatnonzero(xs_sorted[:-1] < xs_sorted[1:])
        for i in boundaries:
            nl = i + 1
            nr = n - nl
            left = prefix[i]
            right = counts - left
            weighted = (nl * _gini(left, nl) + nr * _gini(right, nr)) / n
            gain = parent - weighted
            if gain > best[0]:
                best = (gain, f, (xs_sorted[i] + xs_sorted[i + 1]) / 2.0)
    return best


def _build_tree(X, y, sample_idx, params: TrainParams, n_classes: int, rng: random.Random) -> tuple[list[Node], int]:
    k = params.features_per_split or math.ceil(math.sqrt(X.shape[1]))
    k = min(k, X.shape[1])
    nodes: list[Node] = []

    def make_leaf(idx) -> int:
        counts = np.bincount(y[idx], minlength=n_classes)
        nodes.append(Node(predicted_class=int(np.argmax(counts))))
        return len(nodes) - 1

    def rec(idx, depth) -> int:
        counts = np.bincount(y[idx], minlength=n_classes)
        pure = np.count_nonzero(counts) <= 1
        if (
            pure
            or len(idx) < params.min_samples_split
            or (params.max_depth is not None and depth >= params.max_depth)
        ):
            return make_leaf(idx)
        feats = sorted(rng.sample(range(X.shape[1]), k))
        gain, f, t = _best_split(X, y, idx, feats, n_classes)
        if f < 0 or gain <= 0.0:
            return make_leaf(idx)
        left_idx = idx[X[idx, f] <= t]
        right_idx = idx[X[idx, f] > t]
        nid = len(nodes)
        nodes.append(Node(feature=f, threshold=float(t)))
        nodes[nid].left = rec(left_idx, depth + 1)
        nodes[nid].right = rec(right_idx, depth + 1)
        return nid

    root = rec(sample_idx, 0)
    return nodes, root


def annotate_counts(tree: DecisionTree, dataset: Dataset) -> None:
    """Fill routing counts and leaf confusions from the full train and test sets."""
    for node in tree.nodes:
        node.train_count = 0
        node.test_count = 0
        node.train_class_counts = np.zeros(dataset.n_classes, dtype=np.int64)
        node.test_confusion = {}
    for i in range(dataset.n_rows):
        row = dataset.rows[i]
        label = int(dataset.labels[i])
        is_test = dataset.split[i] == 1
        nid = tree.root
        while True:
            node = tree.nodes[nid]
            if is_test:
                node.test_count += 1
            else:
                node.train_count += 1
                node.train_class_counts[label] += 1
            if node.is_leaf:
                if is_test:
                    node.test_confusion[label] = node.test_confusion.get(label, 0) + 1
                break
            nid = node.left if row[node.feature] <= node.threshold else node.right


def train_forest(dataset: Dataset, params: TrainParams) -> Forest:
    """Train a random forest: bootstrap sampling + per-split feature subsets + Gini CART.

    Deterministic given the seed; tree t uses a generator seeded with seed XOR t.
    """
    params.validate()
    dataset.validate()
    train_idx = dataset.train_indices()
    if len(np.unique(dataset.labels[train_idx])) < 2:
        raise ValueError("training split has fewer than 2 distinct labels")
    X, y = dataset.rows, dataset.labels
    trees = []
    for t in range(params.n_trees):
        rng = random.Random(params.seed ^ t)
        if params.bootstrap:
            sample = np.sort(
                np.array([train_idx[rng.randrange(len(train_idx))] for _ in range(len(train_idx))])
            )
        else:
            sample = train_idx
        nodes, root = _build_tree(X, y, sample, params, dataset.n_classes, rng)
        tree = DecisionTree(nodes, root, t)
        annotate_counts(tree, dataset)
        trees.append(tree)
    return Forest(trees, params, dataset)


def predict(forest: Forest, row: np.ndarray) -> int:
    """Plurality vote over trees; ties go to the lowest class index."""
    votes = np.zeros(forest.dataset.n_classes, dtype=np.int64)
    for tree in forest.trees:
        votes[tree.predict(row)] += 1
    return int(np.argmax(votes))


def extract_rules(tree: DecisionTree, dataset: Dataset) -> list[Rule]:
    """One rule per leaf, depth-first left-to-right.

    Intervals start at the global feature ranges; a left descent tightens the
    upper bound to the threshold, a right descent tightens the lower bound.
    """
    lo0 = np.array([m.range[0] for m in dataset.features])
    hi0 = np.array([m.range[1] for m in dataset.features])
    rules: list[Rule] = []

    def rec(nid, lo, hi):
        node = tree.nodes[nid]
        if node.is_leaf:
            rules.append(Rule(tree.tree_index, nid, node.predicted_class, lo.copy(), hi.copy()))
            return
        f, t = node.feature, node.threshold
        saved = hi[f]
        hi[f] = min(hi[f], t)
        rec(node.left, lo, hi)
        hi[f] = saved
        saved = lo[f]
        lo[f] = max(lo[f], t)
        rec(node.right, lo, hi)
        lo[f] = saved

    rec(tree.root, lo0.copy(), hi0.copy())
    return rules


# ---------------------------------------------------------------------------
# Interchange format. Counts and confusions are always recomputed on import.
# ---------------------------------------------------------------------------

def export_forest(forest: Forest) -> bytes:
    doc = {
        "dataset_schema": {
            "features": [
                {
                    "name": m.name,
                    "kind": m.kind,
                    "range": [m.range[0], m.range[1]],
                    **({"category_names": list(m.category_names)} if m.category_names else {}),
                }
                for m in forest.dataset.features
            ],
            "classes": list(forest.dataset.classes),
        },
        "trees": [
            {
                "root": tree.root,
                "nodes": [
                    {"id": i, "kind": "leaf", "class": node.predicted_class}
                    if node.is_leaf
                    else {
                        "id": i,
                        "kind": "split",
                        "feature": node.feature,
                        "threshold": node.threshold,
                        "left": node.left,
                        "right": node.right,
                    }
                    for i, node in enumerate(tree.nodes)
                ],
            }
            for tree in forest.trees
        ],
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()


def import_forest(data: bytes | str, dataset: Dataset, params: TrainParams | None = None) -> Forest:
    """Parse an interchange document and recompute all counts against the dataset."""
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as e:
        raise ForestImportError(f"invalid JSON: {e}") from e
    trees_doc = doc.get("trees")
    if not isinstance(trees_doc, list) or not trees_doc:
        raise ForestImportError("document must contain at least one tree")
    schema = doc.get("dataset_schema", {})
    classes = schema.get("classes")
    if classes is not None and list(classes) != list(dataset.classes):
        raise ForestImportError("class universe does not match dataset")
    trees = []
    for t, tdoc in enumerate(trees_doc):
        if "root" not in tdoc or "nodes" not in tdoc:
            raise ForestImportError(f"tree {t}: missing root or nodes")
        raw = {nd["id"]: nd for nd in tdoc["nodes"]}
        nodes = [Node() for _ in range(len(raw))]
        for nid, nd in raw.items():
            if nd["kind"] == "leaf":
                if "class" not in nd:
                    raise ForestImportError(f"tree {t}: leaf {nid} lacks a class")
                nodes[nid] = Node(predicted_class=int(nd["class"]))
            elif nd["kind"] == "split":
                for key in ("feature", "threshold", "left", "right"):
                    if key not in nd:
                        raise ForestImportError(f"tree {t}: split {nid} lacks {key}")
                if nd["left"] not in raw or nd["right"] not in raw:
                    raise ForestImportError(f"tree {t}: split {nid} references a missing child")
                nodes[nid] = Node(
                    feature=int(nd["feature"]),
                    threshold=float(nd["threshold"]),
                    left=int(nd["left"]),
                    right=int(nd["right"]),
                )
            else:
                raise ForestImportError(f"tree {t}: unknown node kind {nd['kind']!r}")
        tree = DecisionTree(nodes, int(tdoc["root"]), t)
        annotate_counts(tree, dataset)
        trees.append(tree)
    return Forest(trees, params or TrainParams(n_trees=len(trees)), dataset)
