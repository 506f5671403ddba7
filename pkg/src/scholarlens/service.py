"""HTTP API: search, ontology browsing, source listing, health.

A thin FastAPI layer over the engine.  All shared state (ontology,
registry, config) is loaded once at startup and never mutated, so
request handling is freely concurrent; the on-disk cache is the only
mutable resource.  Every non-200 response carries the same JSON error
body: `{"error": <name>, "detail": <text>}`.
"""

from __future__ import annotations

import logging
from contextlib import asynccontextmanager
from typing import Optional

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import serialize
from .config import Engine, ServiceConfig, load_config, load_engine
from .errors import (
    EmptyQueryError,
    ScholarlensError,
    UnknownClassError,
    UnknownSourceError,
)
from .ontology import Ontology, ancestors_of, children_of
from .query import SearchRequest, federate_search
from .sources import list_sources
from .text import normalize

logger = logging.getLogger(__name__)

_MEDIA_TYPES = {"json": "application/json", "xml": "application/xml", "table": "text/plain"}


def _error(status: int, name: str, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": name, "detail": detail})


def _error_from(exc: Exception) -> JSONResponse:
    name = type(exc).__name__
    if isinstance(exc, (EmptyQueryError, ValueError)):
        return _error(400, name, str(exc) or "bad request")
    if isinstance(exc, (UnknownSourceError, UnknownClassError)):
        return _error(404, name, str(exc))
    if isinstance(exc, ScholarlensError):
        return _error(400, name, str(exc))
    logger.exception("internal error")
    return _error(500, name, str(exc))


def ontology_tree(o: Ontology) -> dict:
    """The full hierarchy as nested {id, label, children} JSON.

    With several roots a synthetic unnamed root holds them, so clients
    always receive a single tree.
    """

    def node_json(node_id: str) -> dict:
        return {
            "id": node_id,
            "label": o.nodes[node_id].label,
            "children": [node_json(child) for child in sorted(o.children_index[node_id])],
        }

    roots = sorted(o.root_ids)
    if len(roots) == 1:
        return node_json(roots[0])
    return {"id": "", "label": "", "children": [node_json(r) for r in roots]}


def create_app(
    config: Optional[ServiceConfig] = None, engine: Optional[Engine] = None
) -> FastAPI:
    """Build the application; state loads on startup (lifespan).

    Until startup completes every endpoint answers 503, which is what
    `/healthz` reports to orchestrators.  Pass a prebuilt `engine` to
    skip filesystem loading (tests, embedding).
    """
    resolved_config = config or (engine.config if engine is not None else load_config())

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        app.state.engine = engine if engine is not None else load_engine(resolved_config)
        logger.info("service ready on %s:%d", resolved_config.host, resolved_config.port)
        yield

    app = FastAPI(title="scholarlens", lifespan=lifespan)
    app.state.engine = None

    if resolved_config.cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(resolved_config.cors_origins),
            allow_methods=["GET"],
            allow_headers=["*"],
        )

    def _engine() -> Optional[Engine]:
        return getattr(app.state, "engine", None)

    @app.get("/healthz")
    def healthz():
        if _engine() is None:
            return _error(503, "NotReady", "service is still loading")
        return {"status": "ok"}

    @app.get("/api/search")
    def api_search(request: Request):
        eng = _engine()
        if eng is None:
            return _error(503, "NotReady", "service is still loading")
        params = request.query_params
        try:
            sources_param = params.get("sources", "")
            req = SearchRequest(
                raw_query=params.get("q", ""),
                depth=int(params.get("depth", "1")),
                gamma=float(params.get("gamma", "0.5")),
                sources=(
                    [s.strip() for s in sources_param.split(",") if s.strip()]
                    if sources_param
                    else None
                ),
                limit=int(params.get("limit", "50")),
                format=params.get("format", "json"),
            )
            rs = federate_search(req, eng.ontology, eng.registry, cache=eng.cache)
        except Exception as exc:  # noqa: BLE001 — mapped to the documented status codes
            return _error_from(exc)
        if req.format == "xml":
            body: bytes = serialize.to_xml(rs)
        elif req.format == "table":
            body = serialize.to_table(rs).encode("utf-8")
        else:
            body = serialize.to_json(rs)
        return Response(content=body, media_type=_MEDIA_TYPES[req.format])

    @app.get("/api/ontology")
    def api_ontology():
        eng = _engine()
        if eng is None:
            return _error(503, "NotReady", "service is still loading")
        return ontology_tree(eng.ontology)

    @app.get("/api/ontology/{class_id}/children")
    def api_children(class_id: str):
        eng = _engine()
        if eng is None:
            return _error(503, "NotReady", "service is still loading")
        try:
            child_ids = sorted(children_of(eng.ontology, class_id))
            ancestors = ancestors_of(eng.ontology, class_id)
        except ScholarlensError as exc:
            return _error_from(exc)
        node_id = normalize(class_id)
        labels = eng.ontology.labels()
        return {
            "id": node_id,
            "label": labels[node_id],
            "children": [{"id": cid, "label": labels[cid]} for cid in child_ids],
            "ancestors": [
                {"id": aid, "label": labels[aid], "hops": hops}
                for aid, hops in sorted(ancestors.items(), key=lambda kv: (kv[1], kv[0]))
            ],
        }

    @app.get("/api/sources")
    def api_sources():
        eng = _engine()
        if eng is None:
            return _error(503, "NotReady", "service is still loading")
        return [
            {"id": sid, "display_name": name, "mode": mode}
            for sid, name, mode in list_sources(eng.registry)
        ]

    if resolved_config.static_dir is not None and resolved_config.static_dir.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount(
            "/", StaticFiles(directory=resolved_config.static_dir, html=True), name="ui"
        )

    return app
