import json

import pytest
from fastapi.testclient import TestClient

from forestmap.server import create_app

PARAMS = {"n_trees": 8}


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


@pytest.fixture(scope="module")
def sid(client):
    resp = client.post("/api/sessions", json={"builtin": "glass", "params": PARAMS})
    assert resp.status_code == 200
    return resp.json()["session_id"]


def test_datasets_endpoint(client):
    resp = client.get("/api/datasets")
    assert resp.status_code == 200
    assert resp.json()["builtins"] == ["glass", "penguin"]


def test_create_session_requires_data(client):
    resp = client.post("/api/sessions", json={})
    assert resp.status_code == 400


def test_create_session_rejects_bad_csv(client):
    resp = client.post("/api/sessions", json={"csv": "a,label\n1,only\n2,only\n"})
    assert resp.status_code == 400
    assert "classes" in resp.json()["detail"]


def test_create_session_from_csv(client):
    csv = "x,y,label\n" + "".join(
        f"{i},{i * 2},{'a' if i % 2 else 'b'}\n" for i in range(20)
    )
    resp = client.post("/api/sessions", json={"csv": csv, "name": "tiny", "params": {"n_trees": 3}})
    assert resp.status_code == 200
    body = resp.json()
    assert body["dataset"] == "tiny"
    assert body["n_trees"] == 3


def test_overview(client, sid):
    resp = client.get(f"/api/sessions/{sid}/overview")
    assert resp.status_code == 200
    doc = resp.json()
    assert doc["dataset"]["name"] == "glass"
    assert doc["n_trees"] == 8
    # responses are canonical: sorted keys, no whitespace
    assert resp.content == json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()


def test_projection_default_m(client, sid):
    resp = client.get(f"/api/sessions/{sid}/projection")
    assert resp.status_code == 200
    doc = resp.json()
    assert len(doc["points"]) == 8
    assert len(doc["labels"]) == 8
    assert len(doc["hulls"]) == len(doc["medoids"])


def test_clusters_with_filter(client, sid):
    flt = json.dumps({"ranges": [[0, 1.51, 1.53]], "cells": [[0, 1]]})
    resp = client.get(f"/api/sessions/{sid}/clusters", params={"filter": flt})
    assert resp.status_code == 200
    for cluster in resp.json()["clusters"]:
        assert cluster["feature_plot"]["levels"]
        assert cluster["rule_plot"]["columns"]


def test_clusters_bad_filter(client, sid):
    resp = client.get(f"/api/sessions/{sid}/clusters", params={"filter": "{bad json"})
    assert resp.status_code == 400
    resp = client.get(
        f"/api/sessions/{sid}/clusters", params={"filter": json.dumps({"ranges": [[99, 0, 1]]})}
    )
    assert resp.status_code == 400


def test_trees_endpoint(client, sid):
    resp = client.get(f"/api/sessions/{sid}/trees", params={"cluster": 0})
    assert resp.status_code == 200
    doc = resp.json()
    layout = doc["layouts"][0]
    assert layout["nodes"] and layout["edges"]
    resp = client.get(f"/api/sessions/{sid}/trees", params={"cluster": 999})
    assert resp.status_code == 404


def test_unknown_session_404(client):
    assert client.get("/api/sessions/missing/overview").status_code == 404


def test_import_forest_via_service(client, sid):
    # export through a fresh training run, then import the document verbatim
    from forestmap.dataset import load_builtin
    from forestmap.forest import TrainParams, export_forest, train_forest

    ds = load_builtin("glass")
    forest = train_forest(ds, TrainParams(n_trees=4))
    resp = client.post(
        "/api/sessions",
        json={"builtin": "glass", "forest": export_forest(forest).decode(), "params": {"n_trees": 4}},
    )
    assert resp.status_code == 200
    sid2 = resp.json()["session_id"]
    doc = client.get(f"/api/sessions/{sid2}/overview").json()
    assert doc["n_trees"] == 4


def test_persisted_session_survives_restart(tmp_path_factory):
    data_dir = str(tmp_path_factory.mktemp("state"))
    app1 = create_app(data_dir=data_dir)
    with TestClient(app1) as c1:
        sid = c1.post("/api/sessions", json={"builtin": "glass", "params": PARAMS}).json()[
            "session_id"
        ]
        before = c1.get(f"/api/sessions/{sid}/overview").content
    app2 = create_app(data_dir=data_dir)
    with TestClient(app2) as c2:
        after = c2.get(f"/api/sessions/{sid}/overview").content
    assert before == after
