import numpy as np
import pytest

from forestmap import payloads
from forestmap.session import (
    RestoreError,
    Session,
    dataset_doc,
    dataset_from_doc,
    persist,
    restore,
)
from forestmap.viewmodel import FilterState


def test_dataset_doc_round_trip(small_glass_session):
    ds = small_glass_session.dataset
    back = dataset_from_doc(dataset_doc(ds))
    assert back.classes == ds.classes
    assert np.array_equal(back.rows, ds.rows)
    assert np.array_equal(back.labels, ds.labels)
    assert np.array_equal(back.split, ds.split)
    assert [m.name for m in back.features] == [m.name for m in ds.features]


def test_session_caches_are_stable(small_glass_session):
    s = small_glass_session
    assert s.matrix() is s.matrix()
    assert s.dendrogram() is s.dendrogram()
    assert s.clustering(2) is s.clustering(2)
    assert s.cluster_curve() is s.cluster_curve()


def test_persist_restore_round_trip(small_glass_session, tmp_path):
    s = small_glass_session
    s.matrix()  # force the cache so it is written too
    persist(s, tmp_path)
    r = restore(s.session_id, tmp_path)
    assert np.array_equal(r.matrix(), s.matrix())
    a = payloads.canonical_json(payloads.overview_payload(s))
    b = payloads.canonical_json(payloads.overview_payload(r))
    assert a == b
    m = s.cluster_curve().default_m
    a = payloads.canonical_json(payloads.projection_payload(s, m))
    b = payloads.canonical_json(payloads.projection_payload(r, m))
    assert a == b


def test_restore_without_matrix_cache_recomputes(small_glass_session, tmp_path):
    s = small_glass_session
    persist(s, tmp_path)
    (tmp_path / s.session_id / "matrix.txt").unlink(missing_ok=True)
    r = restore(s.session_id, tmp_path)
    assert np.array_equal(r.matrix(), s.matrix())


def test_restore_missing_session(tmp_path):
    with pytest.raises(RestoreError):
        restore("nope", tmp_path)


def test_restore_names_broken_file(small_glass_session, tmp_path):
    s = small_glass_session
    persist(s, tmp_path)
    (tmp_path / s.session_id / "forest.json").write_text("{broken")
    with pytest.raises(RestoreError, match="forest.json"):
        restore(s.session_id, tmp_path)


def test_cluster_payload_matches_views(small_glass_session):
    s = small_glass_session
    m = s.cluster_curve().default_m
    doc = payloads.cluster_payloads(s, m, FilterState())
    clustering = s.clustering(m)
    assert doc["m"] == m
    assert len(doc["clusters"]) == clustering.n_clusters
    for cid, entry in enumerate(doc["clusters"]):
        assert entry["members"] == clustering.clusters[cid]
        assert entry["medoid"] == clustering.medoids[cid]
        assert entry["size"] == len(clustering.clusters[cid])


def test_trees_payload_representative_first(small_glass_session):
    s = small_glass_session
    m = s.cluster_curve().default_m
    doc = payloads.trees_payload(s, m, 0)
    assert doc["layouts"][0]["tree"] == doc["representative"]
    with pytest.raises(KeyError):
        payloads.trees_payload(s, m, 999)


def test_overview_payload_shape(small_glass_session):
    doc = payloads.overview_payload(small_glass_session)
    assert doc["dataset"]["n_rows"] == 214
    assert len(doc["distributions"]) == 9
    assert len(doc["confusion"]["counts"]) == 6
    assert doc["n_trees"] == 10
    for dist in doc["distributions"]:
        assert len(dist["grid"]) == 256
