"""FastAPI facade over analysis sessions."""
from __future__ import annotations

import json
import os
import threading

from fastapi import FastAPI, HTTPException, Query, Response
from pydantic import BaseModel

from . import payloads
from .dataset import BUILTIN_DATASETS, DEFAULT_SEED, IngestError, ingest_csv, load_builtin
from .forest import ForestImportError, TrainParams, import_forest, train_forest
from .session import RestoreError, Session, persist, restore
from .viewmodel import FilterState, filter_from_doc


class TrainParamsModel(BaseModel):
    n_trees: int = 100
    max_depth: int | None = None
    min_samples_split: int = 2
    features_per_split: int | None = None
    bootstrap: bool = True
    seed: int = DEFAULT_SEED
    test_fraction: float = 0.3

    def to_params(self) -> TrainParams:
        return TrainParams(**self.model_dump())


class CreateSessionRequest(BaseModel):
    builtin: str | None = None
    csv: str | None = None
    forest: str | None = None  # interchange document; requires csv or builtin for the data
    name: str = "dataset"
    label_column: str | None = None
    params: TrainParamsModel = TrainParamsModel()


class SessionStore:
    def __init__(self, data_dir: str | None = None):
        self.data_dir = data_dir
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def add(self, session: Session) -> None:
        with self._lock:
            self._sessions[session.session_id] = session
        if self.data_dir:
            persist(session, self.data_dir)

    def get(self, session_id: str) -> Session:
        with self._lock:
            if session_id in self._sessions:
                return self._sessions[session_id]
        if self.data_dir:
            try:
                session = restore(session_id, self.data_dir)
            except RestoreError:
                raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
            with self._lock:
                self._sessions.setdefault(session_id, session)
                return self._sessions[session_id]
        raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")


def _json_response(payload: dict) -> Response:
    return Response(content=payloads.canonical_json(payload), media_type="application/json")


def _parse_filter(raw: str | None, session: Session) -> FilterState:
    if not raw:
        return FilterState()
    try:
        flt = filter_from_doc(json.loads(raw))
        flt.validate(session.dataset)
    except (ValueError, TypeError) as e:
        raise HTTPException(status_code=400, detail=f"invalid filter: {e}")
    return flt


def create_app(data_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="forestmap", version="0.1.0")
    store = SessionStore(data_dir or os.environ.get("FORESTMAP_DATA_DIR"))
    app.state.store = store

    @app.get("/api/datasets")
    def datasets():
        return _json_response({"builtins": list(BUILTIN_DATASETS)})

    @app.post("/api/sessions")
    def create_session(req: CreateSessionRequest):
        params = req.params.to_params()
        try:
            if req.builtin:
                dataset = load_builtin(req.builtin, seed=params.seed, test_fraction=params.test_fraction)
            elif req.csv is not None:
                dataset = ingest_csv(
                    req.csv,
                    label_column=req.label_column,
                    name=req.name,
                    seed=params.seed,
                    test_fraction=params.test_fraction,
                )
            else:
                raise HTTPException(status_code=400, detail="provide builtin or csv")
            if req.forest is not None:
                forest = import_forest(req.forest, dataset, params)
            else:
                forest = train_forest(dataset, params)
        except (IngestError, ForestImportError, ValueError) as e:
            detail = str(e)
            if isinstance(e, IngestError) and getattr(e, "args", None):
                detail = f"upload rejected: {e}"
            raise HTTPException(status_code=400, detail=detail)
        session = Session.create(dataset, forest)
        store.add(session)
        return _json_response(
            {
                "session_id": session.session_id,
                "dataset": dataset.name,
                "n_trees": forest.n_trees,
                "rejected_rows": dataset.rejected_rows,
            }
        )

    @app.get("/api/sessions/{sid}/overview")
    def overview(sid: str):
        session = store.get(sid)
        return _json_response(payloads.overview_payload(session))

    @app.get("/api/sessions/{sid}/projection")
    def projection(sid: str, m: int | None = Query(default=None, ge=1)):
        session = store.get(sid)
        if m is None:
            m = session.cluster_curve().default_m
        return _json_response(payloads.projection_payload(session, m))

    @app.get("/api/sessions/{sid}/clusters")
    def clusters(sid: str, m: int | None = Query(default=None, ge=1), filter: str | None = None):
        session = store.get(sid)
        if m is None:
            m = session.cluster_curve().default_m
        flt = _parse_filter(filter, session)
        return _json_response(payloads.cluster_payloads(session, m, flt))

    @app.get("/api/sessions/{sid}/trees")
    def trees(sid: str, cluster: int = 0, m: int | None = Query(default=None, ge=1)):
        session = store.get(sid)
        if m is None:
            m = session.cluster_curve().default_m
        try:
            return _json_response(payloads.trees_payload(session, m, cluster))
        except KeyError as e:
            raise HTTPException(status_code=404, detail=str(e))

    return app


app = create_app()
