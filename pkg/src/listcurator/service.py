"""HTTP facade over a single curation session.

One session per process. Mutations (select, iterate) are serialized by a
non-blocking lock: an overlapping mutation gets 409. Reads never take the
lock; they serve an immutable published snapshot that is swapped in only
when a mutation commits, so a concurrent read sees the full pre- or
post-mutation state, never a torn one.
"""

from __future__ import annotations

import threading
import uuid
from pathlib import Path

from fastapi import FastAPI, Query
from fastapi.responses import HTMLResponse, JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .aggregation import FilterConfig, batch_to_dict, recommend
from .ranking import HitsParams
from .session import CurationSession, save_checkpoint, select, update
from .snapshot import SnapshotStore
from .views import (
    CoreSets,
    ViewGraph,
    build_colist_graph,
    build_friend_graph,
    build_mention_graph,
    build_retweet_graph,
)

_VIEW_NAMES = ("friend", "mention", "retweet", "colist")


class SelectRequest(BaseModel):
    accepted: list[str]


class ApiSession:
    """Session wrapper enforcing one mutation at a time."""

    def __init__(
        self,
        session: CurationSession,
        store: SnapshotStore,
        r: int = 50,
        filters: FilterConfig | None = None,
        hits_params: HitsParams = HitsParams(),
        checkpoint_path=None,
        session_id: str | None = None,
    ):
        if filters is None:
            from .snapshot import latest_tweet_time

            filters = FilterConfig(reference_time=latest_tweet_time(store))
        self.session_id = session_id or uuid.uuid4().hex
        self._session = session
        self._store = store
        self._r = r
        self._filters = filters
        self._hits_params = hits_params
        self._checkpoint_path = checkpoint_path
        self._mutation_lock = threading.Lock()
        self.request_log: list[dict] = []
        self.published: dict = self._build_published()

    # -- published immutable state -------------------------------------

    def _build_published(self) -> dict:
        session = self._session
        batch = session.latest_batch()
        batch_users = set(batch.users()) if batch else set()
        allowed = session.sets.core_set | batch_users
        graphs = {
            "friend": build_friend_graph(session.sets, session.explored_follow_edges()),
            "mention": build_mention_graph(session.sets, session.explored_core_tweets()),
            "retweet": build_retweet_graph(session.sets, session.explored_core_tweets()),
            "colist": build_colist_graph(session.sets, session.explored_list_records()),
        }
        return {
            "summary": {
                "session_id": self.session_id,
                "iteration": session.iteration,
                "core_size": len(session.sets.core),
                "candidate_size": len(session.sets.candidates),
                "budgets": {
                    "max_links": session.budgets.max_links,
                    "max_lists": session.budgets.max_lists,
                    "max_tweets": session.budgets.max_tweets,
                    "degree_cap": session.budgets.degree_cap,
                    "mention_fanout": session.budgets.mention_fanout,
                },
            },
            "batch": batch_to_dict(batch) if batch else None,
            "graphs": {
                name: _graph_to_dict(g, session.sets, batch_users, allowed)
                for name, g in graphs.items()
            },
        }

    def _commit(self, op: str, payload: dict) -> None:
        self.request_log.append({"op": op, **payload})
        if self._checkpoint_path:
            save_checkpoint(self._session, self._checkpoint_path)
        self.published = self._build_published()

    # -- mutations -------------------------------------------------------

    def do_select(self, accepted: list[str]):
        if not self._mutation_lock.acquire(blocking=False):
            return 409, {"error": "another mutation is in flight"}
        try:
            batch = self._session.latest_batch()
            if batch is None:
                return 409, {"error": "no recommendation batch yet; POST /api/iterate"}
            batch_users = set(batch.users())
            invalid = sorted(
                {u for u in accepted if u not in batch_users or u not in self._session.sets.candidates}
            )
            if invalid:
                return 400, {"error": "users not selectable from the latest batch", "invalid": invalid}
            select(self._session, accepted)
            self._commit("select", {"accepted": list(accepted)})
            return 200, self.published["summary"]
        finally:
            self._mutation_lock.release()

    def do_iterate(self):
        if not self._mutation_lock.acquire(blocking=False):
            return 409, {"error": "another mutation is in flight"}
        try:
            # No selection submitted means accept nothing; the whole batch
            # stays rejected-this-iteration (the IterationRecord default).
            if self._session.history:
                update(self._session, self._store)
            batch = recommend(self._session, self._store, self._r, self._filters, self._hits_params)
            self._commit("iterate", {})
            return 200, batch_to_dict(batch)
        finally:
            self._mutation_lock.release()


def _graph_to_dict(
    graph: ViewGraph, sets: CoreSets, batch_users: set[str], allowed: set[str]
) -> dict:
    core = sets.core_set
    nodes = sorted(graph.nodes & allowed)
    edges = [
        {"source": u, "target": v, "weight": w}
        for (u, v), w in sorted(graph.edges.items())
        if u in allowed and v in allowed
    ]
    return {
        "view": graph.kind.value,
        "directed": graph.directed,
        "nodes": [
            {"id": u, "core": u in core, "recommended": u in batch_users} for u in nodes
        ],
        "edges": edges,
    }


# JSON schemas for the API responses; tests validate every payload.
SUMMARY_SCHEMA = {
    "type": "object",
    "required": ["session_id", "iteration", "core_size", "candidate_size", "budgets"],
    "additionalProperties": False,
    "properties": {
        "session_id": {"type": "string"},
        "iteration": {"type": "integer", "minimum": 0},
        "core_size": {"type": "integer", "minimum": 0},
        "candidate_size": {"type": "integer", "minimum": 0},
        "budgets": {
            "type": "object",
            "required": ["max_links", "max_lists", "max_tweets", "degree_cap", "mention_fanout"],
            "additionalProperties": False,
            "properties": {
                "max_links": {"type": "integer", "minimum": 0},
                "max_lists": {"type": "integer", "minimum": 0},
                "max_tweets": {"type": "integer", "minimum": 0},
                "degree_cap": {"type": "integer", "minimum": 0},
                "mention_fanout": {"type": "integer", "minimum": 0},
            },
        },
    },
}

BATCH_SCHEMA = {
    "type": "object",
    "required": ["iteration", "items"],
    "additionalProperties": False,
    "properties": {
        "iteration": {"type": "integer", "minimum": 0},
        "items": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["user", "score", "ranks"],
                "additionalProperties": False,
                "properties": {
                    "user": {"type": "string"},
                    "score": {"type": "number"},
                    "ranks": {
                        "type": "object",
                        "additionalProperties": False,
                        "properties": {
                            name: {"type": "integer", "minimum": 1}
                            for name in ("friend_nfc", "friend_hits", "colist", "mention", "retweet")
                        },
                    },
                },
            },
        },
    },
}

GRAPH_SCHEMA = {
    "type": "object",
    "required": ["view", "directed", "nodes", "edges"],
    "additionalProperties": False,
    "properties": {
        "view": {"enum": list(_VIEW_NAMES)},
        "directed": {"type": "boolean"},
        "nodes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "core", "recommended"],
                "additionalProperties": False,
                "properties": {
                    "id": {"type": "string"},
                    "core": {"type": "boolean"},
                    "recommended": {"type": "boolean"},
                },
            },
        },
        "edges": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["source", "target", "weight"],
                "additionalProperties": False,
                "properties": {
                    "source": {"type": "string"},
                    "target": {"type": "string"},
                    "weight": {"type": "number"},
                },
            },
        },
    },
}

ERROR_SCHEMA = {
    "type": "object",
    "required": ["error"],
    "properties": {
        "error": {"type": "string"},
        "invalid": {"type": "array", "items": {"type": "string"}},
    },
    "additionalProperties": False,
}

API_SCHEMAS = {
    "session": SUMMARY_SCHEMA,
    "recommendations": BATCH_SCHEMA,
    "graph": GRAPH_SCHEMA,
    "error": ERROR_SCHEMA,
}

_FALLBACK_PAGE = """<!doctype html>
<html><head><title>listcurator</title></head>
<body>
<h1>listcurator service</h1>
<p>No UI bundle configured. API endpoints:</p>
<ul>
<li>GET /api/session</li>
<li>GET /api/recommendations</li>
<li>POST /api/select</li>
<li>POST /api/iterate</li>
<li>GET /api/graph?view=friend|mention|retweet|colist</li>
<li>GET /api/schema</li>
</ul>
</body></html>
"""


def create_app(api: ApiSession | None, ui_dir=None) -> FastAPI:
    app = FastAPI(title="listcurator", docs_url=None, redoc_url=None)

    @app.get("/api/session")
    def get_session():
        if api is None:
            return JSONResponse({"error": "no session loaded"}, status_code=404)
        return api.published["summary"]

    @app.get("/api/recommendations")
    def get_recommendations():
        if api is None:
            return JSONResponse({"error": "no session loaded"}, status_code=404)
        batch = api.published["batch"]
        if batch is None:
            return JSONResponse({"error": "no recommendations yet; POST /api/iterate"}, status_code=409)
        return batch

    @app.post("/api/select")
    def post_select(request: SelectRequest):
        if api is None:
            return JSONResponse({"error": "no session loaded"}, status_code=404)
        status, payload = api.do_select(request.accepted)
        return JSONResponse(payload, status_code=status)

    @app.post("/api/iterate")
    def post_iterate():
        if api is None:
            return JSONResponse({"error": "no session loaded"}, status_code=404)
        status, payload = api.do_iterate()
        return JSONResponse(payload, status_code=status)

    @app.get("/api/graph")
    def get_graph(view: str = Query(...)):
        if api is None:
            return JSONResponse({"error": "no session loaded"}, status_code=404)
        if view not in _VIEW_NAMES:
            return JSONResponse(
                {"error": f"unknown view {view!r}; expected one of {', '.join(_VIEW_NAMES)}"},
                status_code=400,
            )
        return api.published["graphs"][view]

    @app.get("/api/schema")
    def get_schema():
        return API_SCHEMAS

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")
    else:

        @app.get("/", response_class=HTMLResponse)
        def index():
            return _FALLBACK_PAGE

    return app
