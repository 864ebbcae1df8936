"""Analysis sessions: dataset + forest + memoized caches, with disk persistence."""
from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .clustering import ClusterCurve, Clustering, Dendrogram, cluster_curve, complete_linkage, dynamic_hybrid_cut
from .dataset import Dataset, FeatureMeta
from .forest import Forest, Rule, TrainParams, export_forest, extract_rules, import_forest
from .metric import distance_matrix


class RestoreError(ValueError):
    """Raised when a persisted session cannot be read back."""


@dataclass
class Session:
    session_id: str
    dataset: Dataset
    forest: Forest
    created_at: float = field(default_factory=time.time)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)
    _rules: list[list[Rule]] | None = None
    _matrix: np.ndarray | None = None
    _dendrogram: Dendrogram | None = None
    _clusterings: dict[int, Clustering] = field(default_factory=dict)
    _curve: ClusterCurve | None = None
    _confusion: object | None = None
    bandwidth_cache: dict[int, float] = field(default_factory=dict)

    @classmethod
    def create(cls, dataset: Dataset, forest: Forest, session_id: str | None = None) -> "Session":
        return cls(session_id or uuid.uuid4().hex, dataset, forest)

    def rules(self) -> list[list[Rule]]:
        with self._lock:
            if self._rules is None:
                self._rules = [extract_rules(t, self.dataset) for t in self.forest.trees]
            return self._rules

    def rules_by_tree(self) -> dict[int, list[Rule]]:
        return {i: rs for i, rs in enumerate(self.rules())}

    def matrix(self) -> np.ndarray:
        rules = self.rules()
        with self._lock:
            if self._matrix is None:
                self._matrix = distance_matrix(self.forest, rules)
            return self._matrix

    def dendrogram(self) -> Dendrogram:
        matrix = self.matrix()
        with self._lock:
            if self._dendrogram is None:
                self._dendrogram = complete_linkage(matrix)
            return self._dendrogram

    def clustering(self, m: int) -> Clustering:
        dend = self.dendrogram()
        matrix = self.matrix()
        with self._lock:
            if m not in self._clusterings:
                self._clusterings[m] = dynamic_hybrid_cut(dend, matrix, m)
            return self._clusterings[m]

    def cluster_curve(self) -> ClusterCurve:
        dend = self.dendrogram()
        matrix = self.matrix()
        with self._lock:
            if self._curve is None:
                self._curve = cluster_curve(dend, matrix, cut=self._curve_cut)
            return self._curve

    def _curve_cut(self, dend, matrix, m):
        if m not in self._clusterings:
            self._clusterings[m] = dynamic_hybrid_cut(dend, matrix, m)
        return self._clusterings[m]

    def confusion(self):
        from .stats import forest_confusion

        with self._lock:
            if self._confusion is None:
                self._confusion = forest_confusion(self.forest, self.dataset)
            return self._confusion


# ---------------------------------------------------------------------------
# Persistence: one directory per session.
# ---------------------------------------------------------------------------

def dataset_doc(ds: Dataset) -> dict:
    return {
        "name": ds.name,
        "features": [
            {
                "name": m.name,
                "kind": m.kind,
                "range": [m.range[0], m.range[1]],
                "category_names": list(m.category_names) if m.category_names else None,
            }
            for m in ds.features
        ],
        "classes": list(ds.classes),
        "rows": [[float(v) for v in row] for row in ds.rows],
        "labels": [int(v) for v in ds.labels],
        "split": [int(v) for v in ds.split],
        "rejected_rows": list(ds.rejected_rows),
    }


def dataset_from_doc(doc: dict) -> Dataset:
    features = [
        FeatureMeta(
            f["name"],
            f["kind"],
            (f["range"][0], f["range"][1]),
            tuple(f["category_names"]) if f.get("category_names") else None,
        )
        for f in doc["features"]
    ]
    ds = Dataset(
        doc["name"],
        features,
        list(doc["classes"]),
        np.array(doc["rows"], dtype=np.float64).reshape(len(doc["rows"]), len(features)),
        np.array(doc["labels"], dtype=np.int64),
        np.array(doc["split"], dtype=np.int64),
        list(doc.get("rejected_rows", [])),
    )
    ds.validate()
    return ds


def _params_doc(p: TrainParams) -> dict:
    return {
        "n_trees": p.n_trees,
        "max_depth": p.max_depth,
        "min_samples_split": p.min_samples_split,
        "features_per_split": p.features_per_split,
        "bootstrap": p.bootstrap,
        "seed": p.seed,
        "test_fraction": p.test_fraction,
    }


def params_from_doc(doc: dict) -> TrainParams:
    return TrainParams(**doc)


def persist(session: Session, root: str | Path) -> Path:
    """Write dataset, forest interchange, params, and the matrix cache if built."""
    directory = Path(root) / session.session_id
    directory.mkdir(parents=True, exist_ok=True)
    (directory / "dataset.json").write_text(json.dumps(dataset_doc(session.dataset)))
    (directory / "forest.json").write_bytes(export_forest(session.forest))
    (directory / "params.json").write_text(json.dumps(_params_doc(session.forest.params)))
    with session._lock:
        matrix = session._matrix
    if matrix is not None:
        lines = [" ".join(repr(float(v)) for v in row) for row in matrix]
        (directory / "matrix.txt").write_text("\n".join(lines) + "\n")
    return directory


def restore(session_id: str, root: str | Path) -> Session:
    """Rebuild a session; the matrix cache is reloaded if present, else lazy."""
    directory = Path(root) / session_id
    if not directory.is_dir():
        raise RestoreError(f"no persisted session {session_id!r} under {root}")
    try:
        dataset = dataset_from_doc(json.loads((directory / "dataset.json").read_text()))
    except (OSError, ValueError, KeyError) as e:
        raise RestoreError(f"{directory / 'dataset.json'}: {e}") from e
    try:
        params = params_from_doc(json.loads((directory / "params.json").read_text()))
    except (OSError, ValueError, TypeError, KeyError) as e:
        raise RestoreError(f"{directory / 'params.json'}: {e}") from e
    try:
        forest = import_forest((directory / "forest.json").read_bytes(), dataset, params)
    except (OSError, ValueError) as e:
        raise RestoreError(f"{directory / 'forest.json'}: {e}") from e
    session = Session(session_id, dataset, forest)
    matrix_file = directory / "matrix.txt"
    if matrix_file.exists():
        try:
            rows = [
                [float(v) for v in line.split()]
                for line in matrix_file.read_text().splitlines()
                if line.strip()
            ]
            session._matrix = np.array(rows, dtype=np.float64)
        except ValueError as e:
            raise RestoreError(f"{matrix_file}: {e}") from e
    return session
