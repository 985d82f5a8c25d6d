"""Read-only HTTP API over built match indexes.

Indexes (``*.index.json``) are loaded once at startup into an immutable
snapshot; every endpoint answers from that snapshot, so identical
requests return identical bodies for the lifetime of the process.
Unreadable or schema-invalid index files are logged and skipped.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .errors import SchemaError
from .events import EventTag
from .index import (
    MatchIndex,
    filter_by_tag,
    load_index,
    query_point,
    records_in_game,
    records_in_set,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ServiceConfig:
    index_dir: str | Path
    host: str = "127.0.0.1"
    port: int = 8000
    static_dir: str | Path | None = None


def load_indexes(index_dir: str | Path) -> dict[str, MatchIndex]:
    index_dir = Path(index_dir)
    if not index_dir.is_dir():
        raise NotADirectoryError(f"index dir does not exist: {index_dir}")
    indexes: dict[str, MatchIndex] = {}
    for path in sorted(index_dir.glob("*.index.json")):
        try:
            idx = load_index(path)
        except (SchemaError, OSError) as exc:
            logger.warning("skipping %s: %s", path.name, exc)
            continue
        indexes[idx.match_id] = idx
    return indexes


def _error(status: int, code: str, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": code, "detail": detail})


def create_app(cfg: ServiceConfig) -> FastAPI:
    indexes = load_indexes(cfg.index_dir)
    app = FastAPI(title="matchdex", docs_url=None, redoc_url=None)

    @app.exception_handler(RequestValidationError)
    async def _on_validation(_req: Request, exc: RequestValidationError):
        return _error(400, "bad_request", str(exc.errors()[:1]))

    def get_index(match_id: str) -> MatchIndex | None:
        return indexes.get(match_id)

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.get("/api/matches")
    def list_matches():
        return [
            {
                "match_id": idx.match_id,
                "rallies": len(idx.rallies),
                "format": {"best_of": idx.format.best_of},
            }
            for idx in indexes.values()
        ]

    @app.get("/api/matches/{match_id}")
    def match_detail(match_id: str):
        idx = get_index(match_id)
        if idx is None:
            return _error(404, "unknown_match", f"no index for {match_id}")
        return idx.to_json()

    @app.get("/api/matches/{match_id}/segments")
    def segments(match_id: str, tag: str | None = None):
        idx = get_index(match_id)
        if idx is None:
            return _error(404, "unknown_match", f"no index for {match_id}")
        if tag is None:
            records = list(idx.rallies)
        else:
            try:
                want = EventTag(tag)
            except ValueError:
                return _error(400, "bad_request", f"unknown tag: {tag}")
            records = filter_by_tag(idx, want)
        return [r.to_json() for r in records]

    @app.get("/api/matches/{match_id}/sets/{set_no}")
    def set_view(match_id: str, set_no: int):
        idx = get_index(match_id)
        if idx is None:
            return _error(404, "unknown_match", f"no index for {match_id}")
        records = records_in_set(idx, set_no)
        if not records:
            return _error(404, "unknown_coordinates", f"no rallies in set {set_no}")
        return [r.to_json() for r in records]

    @app.get("/api/matches/{match_id}/sets/{set_no}/games/{game_no}")
    def game_view(match_id: str, set_no: int, game_no: int):
        idx = get_index(match_id)
        if idx is None:
            return _error(404, "unknown_match", f"no index for {match_id}")
        records = records_in_game(idx, set_no, game_no)
        if not records:
            return _error(
                404, "unknown_coordinates", f"no rallies in set {set_no} game {game_no}"
            )
        return [r.to_json() for r in records]

    @app.get("/api/matches/{match_id}/points/{set_no}/{game_no}/{point_no}")
    def point_view(match_id: str, set_no: int, game_no: int, point_no: int):
        idx = get_index(match_id)
        if idx is None:
            return _error(404, "unknown_match", f"no index for {match_id}")
        records = query_point(idx, set_no, game_no, point_no)
        if not records:
            return _error(
                404,
                "unknown_coordinates",
                f"no rally at point {set_no}/{game_no}/{point_no}",
            )
        return [r.to_json() for r in records]

    if cfg.static_dir is not None:
        app.mount("/", StaticFiles(directory=str(cfg.static_dir), html=True), name="ui")

    return app


def serve(cfg: ServiceConfig) -> None:
    """Run the service until interrupted."""
    import uvicorn

    uvicorn.run(create_app(cfg), host=cfg.host, port=cfg.port, log_level="info")
