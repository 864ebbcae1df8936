import numpy as np
import pytest

from forestmap.dataset import (
    CATEGORICAL,
    QUANTITATIVE,
    TEST,
    TRAIN,
    IngestError,
    ingest_csv,
    load_builtin,
    stratified_split,
)

CSV = "a,b,label\n1,x,yes\n2,y,no\n3,x,yes\n4,z,no\n5,y,yes\n6,x,no\n"


def test_ingest_basic():
    ds = ingest_csv(CSV)
    assert ds.n_rows == 6
    assert [m.name for m in ds.features] == ["a", "b"]
    assert ds.features[0].kind == QUANTITATIVE
    assert ds.features[1].kind == CATEGORICAL
    assert ds.features[1].category_names == ("x", "y", "z")
    assert ds.classes == ["no", "yes"]
    # categorical encoding is ordinal in lexicographic order
    assert list(ds.rows[:, 1]) == [0.0, 1.0, 0.0, 2.0, 1.0, 0.0]


def test_ingest_label_column_by_name():
    ds = ingest_csv(CSV, label_column="b")
    assert ds.classes == ["x", "y", "z"]
    assert [m.name for m in ds.features] == ["a", "label"]


def test_ingest_rejects_incomplete_rows():
    ds = ingest_csv("a,b,label\n1,2,yes\n,2,no\n3,4,no\n")
    assert ds.n_rows == 2
    assert ds.rejected_rows == [1]


def test_ingest_errors():
    with pytest.raises(IngestError):
        ingest_csv("")
    with pytest.raises(IngestError):
        ingest_csv(CSV, label_column="nope")
    with pytest.raises(IngestError):
        ingest_csv("a,label\n1,only\n2,only\n")  # single class
    with pytest.raises(IngestError):
        ingest_csv("a,b,label\n1,2\n")  # ragged row
    with pytest.raises(IngestError):
        ingest_csv("label\nx\ny\n")  # zero feature columns


def test_global_ranges_cover_both_splits():
    ds = ingest_csv(CSV)
    lo, hi = ds.feature_range(0)
    assert lo == 1.0 and hi == 6.0


def test_stratified_split_fraction_and_coverage():
    labels = np.array([0] * 10 + [1] * 10)
    split = stratified_split(labels, 0.3, seed=1)
    for c in (0, 1):
        n_test = int(np.count_nonzero((labels == c) & (split == TEST)))
        assert n_test == 3
    # every class keeps at least one training row, even at extreme fractions
    split = stratified_split(np.array([0, 1]), 0.9, seed=0)
    assert np.count_nonzero(split == TRAIN) == 2


def test_split_determinism():
    labels = np.array([0, 1] * 20)
    a = stratified_split(labels, 0.3, seed=7)
    b = stratified_split(labels, 0.3, seed=7)
    assert np.array_equal(a, b)


def test_builtin_glass_shape():
    ds = load_builtin("glass")
    assert ds.n_rows == 214
    assert ds.n_features == 9
    assert ds.n_classes == 6
    assert "Building float" in ds.classes


def test_builtin_penguin_shape():
    ds = load_builtin("penguin")
    assert ds.n_rows == 333
    assert ds.n_classes == 3
    kinds = {m.name: m.kind for m in ds.features}
    assert kinds["island"] == CATEGORICAL
    assert kinds["body_mass_g"] == QUANTITATIVE


def test_builtin_unknown():
    with pytest.raises(IngestError):
        load_builtin("iris")
