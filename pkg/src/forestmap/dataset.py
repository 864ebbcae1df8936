"""Tabular datasets: typed columns, class labels, global ranges, train/test split."""
from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

TRAIN = 0
TEST = 1

DEFAULT_SEED = 68

QUANTITATIVE = "quantitative"
CATEGORICAL = "categorical"


class IngestError(ValueError):
    """Raised when a CSV upload cannot be turned into a valid dataset."""


@dataclass(frozen=True)
class FeatureMeta:
    name: str
    kind: str  # QUANTITATIVE or CATEGORICAL
    range: tuple[float, float]
    category_names: tuple[str, ...] | None = None


@dataclass
class Dataset:
    name: str
    features: list[FeatureMeta]
    classes: list[str]
    rows: np.ndarray  # (n, F) float64, categoricals ordinal-encoded
    labels: np.ndarray  # (n,) int, index into classes
    split: np.ndarray  # (n,) int, TRAIN or TEST
    rejected_rows: list[int] = field(default_factory=list)

    @property
    def n_rows(self) -> int:
        return self.rows.shape[0]

    @property
    def n_features(self) -> int:
        return self.rows.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    def feature_range(self, f: int) -> tuple[float, float]:
        return self.features[f].range

    def train_indices(self) -> np.ndarray:
        return np.flatnonzero(self.split == TRAIN)

    def test_indices(self) -> np.ndarray:
        return np.flatnonzero(self.split == TEST)

    def validate(self) -> None:
        n, nf = self.rows.shape
        if len(self.labels) != n or len(self.split) != n:
            raise ValueError("labels/split length mismatch")
        if nf != len(self.features):
            raise ValueError("feature metadata does not match row width")
        if n and (self.labels.min() < 0 or self.labels.max() >= len(self.classes)):
            raise ValueError("label index out of range")
        for f, meta in enumerate(self.features):
            lo, hi = meta.range
            if lo > hi:
                raise ValueError(f"feature {meta.name}: inverted range")
            col = self.rows[:, f]
            if n and (col.min() < lo or col.max() > hi):
                raise ValueError(f"feature {meta.name}: value outside global range")


def _parse_float(cell: str) -> float | None:
    try:
        return float(cell)
    except ValueError:
        return None


def stratified_split(labels: np.ndarray, test_fraction: float, seed: int) -> np.ndarray:
    """Per-class shuffled split; every class keeps at least one training row."""
    if not 0.0 < test_fraction < 1.0:
        raise ValueError("test_fraction must be in (0, 1)")
    rng = random.Random(seed)
    split = np.full(len(labels), TRAIN, dtype=np.int64)
    for c in range(int(labels.max()) + 1 if len(labels) else 0):
        idx = [int(i) for i in np.flatnonzero(labels == c)]
        rng.shuffle(idx)
        n_test = int(len(idx) * test_fraction + 0.5)
        if n_test >= len(idx):
            n_test = len(idx) - 1
        for i in idx[:n_test]:
            split[i] = TEST
    return split


def ingest_csv(
    data: bytes | str,
    label_column: str | None = None,
    name: str = "dataset",
    seed: int = DEFAULT_SEED,
    test_fraction: float = 0.3,
) -> Dataset:
    """Parse a headered CSV into a Dataset.

    Numeric columns become quantitative features; anything else is
    ordinal-encoded as categorical with lexicographic category order. Rows
    with empty cells are rejected (indices kept on the result). The label
    column defaults to the last column.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    reader = csv.reader(io.StringIO(data))
    table = [row for row in reader if row]
    if not table:
        raise IngestError("empty file")
    header = [h.strip() for h in table[0]]
    if label_column is None:
        label_idx = len(header) - 1
    else:
        if label_column not in header:
            raise IngestError(f"missing label column {label_column!r}")
        label_idx = header.index(label_column)
    if len(header) < 2:
        raise IngestError("zero features: need at least one feature column besides the label")

    kept: list[list[str]] = []
    rejected: list[int] = []
    for i, row in enumerate(table[1:]):
        if len(row) != len(header):
            raise IngestError(f"non-rectangular row at index {i}")
        if any(cell.strip() == "" for cell in row):
            rejected.append(i)
        else:
            kept.append([cell.strip() for cell in row])
    if not kept:
        raise IngestError("no parseable rows")

    feature_cols = [j for j in range(len(header)) if j != label_idx]
    class_names = sorted({row[label_idx] for row in kept})
    if len(class_names) < 2:
        raise IngestError("need at least 2 classes")
    class_index = {c: k for k, c in enumerate(class_names)}

    n = len(kept)
    values = np.zeros((n, len(feature_cols)), dtype=np.float64)
    features: list[FeatureMeta] = []
    for f, j in enumerate(feature_cols):
        cells = [row[j] for row in kept]
        parsed = [_parse_float(c) for c in cells]
        if all(p is not None for p in parsed):
            col = np.array(parsed, dtype=np.float64)
            values[:, f] = col
            features.append(FeatureMeta(header[j], QUANTITATIVE, (float(col.min()), float(col.max()))))
        else:
            cats = sorted(set(cells))
            lut = {c: k for k, c in enumerate(cats)}
            values[:, f] = [lut[c] for c in cells]
            features.append(
                FeatureMeta(header[j], CATEGORICAL, (0.0, float(len(cats) - 1)), tuple(cats))
            )

    labels = np.array([class_index[row[label_idx]] for row in kept], dtype=np.int64)
    split = stratified_split(labels, test_fraction, seed)
    ds = Dataset(name, features, class_names, values, labels, split, rejected)
    ds.validate()
    return ds


BUILTIN_DATASETS = ("glass", "penguin")


def load_builtin(name: str, seed: int = DEFAULT_SEED, test_fraction: float = 0.3) -> Dataset:
    """Load one of the bundled datasets ("glass" or "penguin")."""
    files = {"glass": "glass.csv", "penguin": "penguins.csv"}
    if name not in files:
        raise IngestError(f"unknown builtin dataset {name!r}")
    raw = resources.files("forestmap.data").joinpath(files[name]).read_bytes()
    return ingest_csv(raw, name=name, seed=seed, test_fraction=test_fraction)
