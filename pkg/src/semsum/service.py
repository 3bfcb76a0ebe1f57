"""HTTP service: upload a document once, then summarize, re-threshold, and
search it without re-sending the text.

Scores are cached per document under a settings fingerprint, so changing
only the percentages is a cache hit and re-renders instantly. Sessions
live in memory, expire after a TTL, and expired ids behave exactly like
unknown ids. The embedding stack is loaded once at startup and shared,
immutable, across concurrent requests.

Routes (JSON bodies, errors as {code, message}):
    POST   /v1/documents                    {text} -> {id, token_count}
    POST   /v1/documents/{id}/summary       settings -> rendered output
    POST   /v1/documents/{id}/search        settings -> ranked hits
    DELETE /v1/documents/{id}               idempotent
    GET    /v1/health                       loaded tables + total dimension
"""

from __future__ import annotations

import json
import logging
import os
import threading
import time
import uuid
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Callable, Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import core, render
from .embeddings import EmbeddingStack, PoolingMode, load_vectors
from .search import hits_from_scores
from .tokenizer import TokenizedDocument, tokenize

logger = logging.getLogger(__name__)

SCORE_CACHE_SIZE = 16  # fingerprints kept per session, LRU


@dataclass
class ServiceConfig:
    embedding_paths: list[str]
    host: str = "127.0.0.1"
    port: int = 8080
    default_window: int = 6
    default_pooling: str = "mean"
    max_document_bytes: int = 1_000_000
    session_ttl_seconds: float = 3600.0
    ui_dir: Optional[str] = None

    def __post_init__(self):
        if not self.embedding_paths:
            raise ValueError("config needs at least one embedding path")
        if self.max_document_bytes < 1:
            raise ValueError("max_document_bytes must be >= 1")


def load_config(path: str | os.PathLike) -> ServiceConfig:
    """Read a ServiceConfig from a JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    known = {f for f in ServiceConfig.__dataclass_fields__}
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return ServiceConfig(**raw)


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


@dataclass
class DocumentSession:
    id: str
    document: TokenizedDocument
    created_at: float
    cached: OrderedDict[str, core.ScoreVector] = field(default_factory=OrderedDict)

    def get_scores(self, fingerprint: str) -> core.ScoreVector | None:
        scores = self.cached.get(fingerprint)
        if scores is not None:
            self.cached.move_to_end(fingerprint)
        return scores

    def put_scores(self, scores: core.ScoreVector) -> None:
        self.cached[scores.fingerprint] = scores
        self.cached.move_to_end(scores.fingerprint)
        while len(self.cached) > SCORE_CACHE_SIZE:
            self.cached.popitem(last=False)


class SessionStore:
    """Thread-safe in-memory session map with TTL expiry."""

    def __init__(self, ttl_seconds: float, clock: Callable[[], float] = time.monotonic):
        self.ttl = ttl_seconds
        self.clock = clock
        self._lock = threading.Lock()
        self._sessions: dict[str, DocumentSession] = {}

    def create(self, document: TokenizedDocument) -> DocumentSession:
        session = DocumentSession(id=uuid.uuid4().hex, document=document, created_at=self.clock())
        with self._lock:
            self._purge_expired()
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> DocumentSession | None:
        with self._lock:
            session = self._sessions.get(session_id)
            if session is None:
                return None
            if self._expired(session):
                del self._sessions[session_id]
                return None
            return session

    def delete(self, session_id: str) -> None:
        with self._lock:
            self._sessions.pop(session_id, None)

    def _expired(self, session: DocumentSession) -> bool:
        return self.clock() - session.created_at > self.ttl

    def _purge_expired(self) -> None:
        dead = [sid for sid, s in self._sessions.items() if self._expired(s)]
        for sid in dead:
            del self._sessions[sid]


class CreateDocumentBody(BaseModel):
    text: str


class SummaryBody(BaseModel):
    query: str = core.UNBIASED_SENTINEL
    window: Optional[int] = None
    pooling: Optional[str] = None
    underline_pct: float = 70.0
    highlight_pct: float = 65.0
    format: str = "spans"


class SearchBody(BaseModel):
    query: str
    window: Optional[int] = None
    pooling: Optional[str] = None
    k: int = 10
    dedupe: bool = True


def _bad_params(message: str) -> ApiError:
    return ApiError(422, "BadParams", message)


def create_app(config: ServiceConfig, stack: EmbeddingStack | None = None) -> FastAPI:
    """Build the service app; the stack may be injected for tests."""
    if stack is None:
        tables = tuple(load_vectors(path) for path in config.embedding_paths)
        stack = EmbeddingStack(tables=tables)
        logger.info(
            "loaded %d embedding table(s), total dimension %d",
            len(stack.tables),
            stack.total_dimension,
        )

    app = FastAPI(title="semsum", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    store = SessionStore(ttl_seconds=config.session_ttl_seconds)
    app.state.store = store
    app.state.stack = stack
    app.state.config = config

    @app.exception_handler(ApiError)
    async def api_error_handler(_request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content={"code": exc.code, "message": exc.message})

    @app.exception_handler(RequestValidationError)
    async def validation_handler(_request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=422, content={"code": "BadParams", "message": str(exc.errors())})

    def _session_or_404(session_id: str) -> DocumentSession:
        session = store.get(session_id)
        if session is None:
            raise ApiError(404, "UnknownDocument", f"no document with id {session_id}")
        return session

    def _resolve_settings(window: Optional[int], pooling: Optional[str]) -> tuple[int, PoolingMode]:
        w = config.default_window if window is None else window
        if w < 1:
            raise _bad_params("window must be >= 1")
        try:
            mode = PoolingMode.parse(pooling if pooling is not None else config.default_pooling)
        except ValueError as exc:
            raise _bad_params(str(exc))
        return w, mode

    def _scores_for(
        session: DocumentSession, query: core.BiasQuery, window: int, mode: PoolingMode
    ) -> tuple[core.ScoreVector, bool]:
        fingerprint = core.settings_fingerprint(session.document, stack, window, mode, query)
        cached = session.get_scores(fingerprint)
        if cached is not None:
            return cached, True
        scores = core.score(session.document, stack, query, window=window, mode=mode)
        session.put_scores(scores)
        return scores, False

    @app.post("/v1/documents")
    def create_document(body: CreateDocumentBody):
        if len(body.text.encode("utf-8")) > config.max_document_bytes:
            raise ApiError(413, "TooLarge", f"document exceeds {config.max_document_bytes} bytes")
        document = tokenize(body.text)
        if not document.tokens:
            raise ApiError(400, "EmptyDocument", "document has no tokens")
        session = store.create(document)
        return {"id": session.id, "token_count": len(document.tokens)}

    @app.post("/v1/documents/{session_id}/summary")
    def summarize(session_id: str, body: SummaryBody):
        session = _session_or_404(session_id)
        window, mode = _resolve_settings(body.window, body.pooling)
        if body.format not in ("spans", "html", "card"):
            raise _bad_params(f"unknown format {body.format!r}; expected spans, html, or card")
        query = core.BiasQuery.parse(body.query)
        if not query.unbiased and not query.text.strip():
            raise _bad_params("query has no tokens")

        scores, cache_hit = _scores_for(session, query, window, mode)
        try:
            selection = core.select(scores, body.underline_pct, body.highlight_pct)
        except core.PercentOutOfRangeError as exc:
            raise _bad_params(str(exc))

        tag = query.text if not query.unbiased else "(unbiased)"
        card = render.CardDocument(
            tag=tag, cite=None, document=session.document, scores=scores, selection=selection
        )
        response = {"cache_hit": cache_hit, "fingerprint": scores.fingerprint, "format": body.format}
        if body.format == "spans":
            report = render.build_span_report(card)
            response["settings"] = report.settings.as_dict()
            response["spans"] = [s.as_dict() for s in report.spans]
        elif body.format == "html":
            response["content"] = render.render_html(card)
        else:
            response["content"] = render.render_card_text(card)
        return response

    @app.post("/v1/documents/{session_id}/search")
    def search_endpoint(session_id: str, body: SearchBody):
        session = _session_or_404(session_id)
        window, mode = _resolve_settings(body.window, body.pooling)
        if body.k < 1:
            raise _bad_params("k must be >= 1")
        query = core.BiasQuery.parse(body.query)
        if query.unbiased:
            raise ApiError(422, "UnbiasedQueryNotSearchable", "search requires a text query")
        if not query.text.strip():
            raise _bad_params("query has no tokens")

        scores, cache_hit = _scores_for(session, query, window, mode)
        hits = hits_from_scores(session.document, scores, body.k, dedupe=body.dedupe)
        return {
            "cache_hit": cache_hit,
            "hits": [
                {
                    "rank": h.rank,
                    "token_index": h.token_index,
                    "byte_start": h.byte_start,
                    "byte_end": h.byte_end,
                    "score": h.score,
                }
                for h in hits
            ],
        }

    @app.delete("/v1/documents/{session_id}")
    def delete_document(session_id: str):
        store.delete(session_id)
        return {"deleted": session_id}

    @app.get("/v1/health")
    def health():
        return {
            "status": "ok",
            "tables": [
                {"name": t.name, "dimension": t.dimension, "tokens": len(t.entries)}
                for t in stack.tables
            ],
            "total_dimension": stack.total_dimension,
        }

    if config.ui_dir and os.path.isdir(config.ui_dir):
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app


def run(config: ServiceConfig) -> None:
    """Serve until interrupted."""
    import uvicorn

    uvicorn.run(create_app(config), host=config.host, port=config.port, log_level="info")
