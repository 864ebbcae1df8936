import random

import numpy as np
import pytest

from forestmap.dataset import TRAIN, TEST, Dataset, FeatureMeta, QUANTITATIVE, stratified_split
from forestmap.forest import DecisionTree, Forest, Node, TrainParams, annotate_counts


def make_dataset(rng: random.Random, n_rows=40, n_features=3, n_classes=3, name="synthetic") -> Dataset:
    """Random quantitative dataset with a stratified split, for property tests."""
    rows = np.array([[rng.uniform(0, 10) for _ in range(n_features)] for _ in range(n_rows)])
    labels = np.array([i % n_classes for i in range(n_rows)], dtype=np.int64)
    features = [
        FeatureMeta(f"f{f}", QUANTITATIVE, (float(rows[:, f].min()), float(rows[:, f].max())))
        for f in range(n_features)
    ]
    split = stratified_split(labels, 0.3, rng.randrange(1 << 30))
    ds = Dataset(name, features, [f"c{c}" for c in range(n_classes)], rows, labels, split)
    ds.validate()
    return ds


def make_random_tree(rng: random.Random, dataset: Dataset, tree_index=0, max_depth=3) -> DecisionTree:
    """Random binary tree with splits drawn inside each node's feasible interval."""
    nodes: list[Node] = []

    def rec(lo, hi, depth) -> int:
        if depth >= max_depth or rng.random() < 0.3:
            nodes.append(Node(predicted_class=rng.randrange(dataset.n_classes)))
            return len(nodes) - 1
        f = rng.randrange(dataset.n_features)
        if hi[f] - lo[f] <= 1e-9:
            nodes.append(Node(predicted_class=rng.randrange(dataset.n_classes)))
            return len(nodes) - 1
        t = rng.uniform(lo[f], hi[f])
        nid = len(nodes)
        nodes.append(Node(feature=f, threshold=t))
        saved = hi[f]
        hi[f] = t
        nodes[nid].left = rec(lo, hi, depth + 1)
        hi[f] = saved
        saved = lo[f]
        lo[f] = t
        nodes[nid].right = rec(lo, hi, depth + 1)
        lo[f] = saved
        return nid

    lo = [m.range[0] for m in dataset.features]
    hi = [m.range[1] for m in dataset.features]
    root = rec(lo, hi, 0)
    tree = DecisionTree(nodes, root, tree_index)
    annotate_counts(tree, dataset)
    return tree


def make_random_forest(rng: random.Random, n_trees=5, **ds_kwargs) -> Forest:
    dataset = make_dataset(rng, **ds_kwargs)
    trees = [make_random_tree(rng, dataset, tree_index=t) for t in range(n_trees)]
    return Forest(trees, TrainParams(n_trees=n_trees), dataset)


@pytest.fixture(scope="session")
def glass_forest():
    from forestmap.dataset import load_builtin
    from forestmap.forest import train_forest

    ds = load_builtin("glass")
    return train_forest(ds, TrainParams())


@pytest.fixture(scope="session")
def glass_session(glass_forest):
    from forestmap.session import Session

    return Session.create(glass_forest.dataset, glass_forest)


@pytest.fixture(scope="session")
def small_glass_session():
    """10-tree Glass forest: fast enough for service/CLI equivalence checks."""
    from forestmap.dataset import load_builtin
    from forestmap.forest import train_forest
    from forestmap.session import Session

    ds = load_builtin("glass")
    forest = train_forest(ds, TrainParams(n_trees=10))
    return Session.create(ds, forest)
