"""HTTP API over a loaded analysis artifact.

One server process serves one corpus/artifact pair. Reads are lock-free;
user-histogram creation and pending-category state share a single writer
lock, and each created histogram is persisted back into the artifact
file before the response returns.
"""

from __future__ import annotations

import logging
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.middleware.gzip import GZipMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .config import ServerConfig
from .corpus import Corpus
from .embedding import EmbeddingCache, EmbeddingError
from .histogram import SORT_ENTROPY, SORT_TOTAL, sort_histograms
from .pipeline import build_embedding_provider, build_generation_provider
from .providers import ProviderError, ProviderTimeout
from .query import (
    PendingCategory,
    create_user_histogram,
    exact_search,
    generate_candidate_entities,
    semantic_search,
    suggest_dataset_entities,
)
from .schemas import (
    CategoryRequest,
    CreateHistogramRequest,
    ExampleOut,
    ExamplesPage,
    HealthOut,
    HistogramOut,
    PendingCategoryOut,
    SearchRequest,
    SearchResultOut,
)
from .store import AnalysisArtifact, save_artifact, validate_against_corpus

logger = logging.getLogger("texthist.service")

_SORT_KEYS = {"total": SORT_TOTAL, "entropy": SORT_ENTROPY}


class ApiError(Exception):
    def __init__(self, status_code: int, detail: str):
        self.status_code = status_code
        self.detail = detail
        super().__init__(detail)


@dataclass
class PendingRecord:
    pending: PendingCategory
    created_at: float


@dataclass
class SessionState:
    """Everything one server process holds for its corpus/artifact pair."""

    artifact: AnalysisArtifact
    corpus: Corpus
    embed_provider: object
    gen_provider: object
    cache: EmbeddingCache
    server_config: ServerConfig = field(default_factory=ServerConfig)
    artifact_path: str | None = None
    clock: Callable[[], float] = time.monotonic

    def __post_init__(self):
        self.lock = threading.Lock()
        self.histograms = list(self.artifact.histograms)
        self.pending: dict[str, PendingRecord] = {}
        self._pending_counter = 0
        self._user_sequence = len(self.artifact.user_histograms)

    @property
    def entity_table(self):
        return self.artifact.entity_table

    def next_pending_id(self) -> str:
        self._pending_counter += 1
        return f"cat-{self._pending_counter}"

    def next_user_sequence(self) -> int:
        self._user_sequence += 1
        return self._user_sequence

    def purge_expired_pending(self) -> None:
        ttl = self.server_config.pending_ttl
        now = self.clock()
        expired = [k for k, rec in self.pending.items() if now - rec.created_at > ttl]
        for key in expired:
            del self.pending[key]


def build_session_state(
    artifact: AnalysisArtifact,
    corpus: Corpus,
    server_config: ServerConfig | None = None,
    artifact_path: str | None = None,
) -> SessionState:
    """Wire providers and seed the embedding cache from the artifact."""
    validate_against_corpus(artifact, corpus)
    server_config = server_config or ServerConfig()
    embed_provider = build_embedding_provider(
        artifact.config.embedding, timeout=server_config.provider_timeout
    )
    gen_provider = build_generation_provider(
        artifact.config.generation, timeout=server_config.provider_timeout
    )
    cache = EmbeddingCache()
    for text, vec in artifact.embeddings.vectors.items():
        cache.put(artifact.embeddings.provider, text, np.asarray(vec, dtype=np.float64))
    return SessionState(
        artifact=artifact,
        corpus=corpus,
        embed_provider=embed_provider,
        gen_provider=gen_provider,
        cache=cache,
        server_config=server_config,
        artifact_path=artifact_path,
    )


def create_app(state: SessionState | None = None) -> FastAPI:
    app = FastAPI(title="texthist", docs_url="/api/docs", openapi_url="/api/openapi.json")
    app.state.session = state

    server_config = state.server_config if state is not None else ServerConfig()
    app.add_middleware(GZipMiddleware, minimum_size=server_config.compress_min_bytes)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(server_config.cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.exception_handler(ApiError)
    async def on_api_error(request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status_code, content={"detail": exc.detail})

    @app.middleware("http")
    async def log_requests(request: Request, call_next):
        response = await call_next(request)
        logger.info("%s %s -> %d", request.method, request.url.path, response.status_code)
        return response

    def session() -> SessionState:
        if app.state.session is None:
            raise ApiError(503, "no artifact loaded")
        return app.state.session

    @app.get("/api/health", response_model=HealthOut)
    def health():
        s = session()
        auto = sum(1 for h in s.histograms if h.source == "auto")
        return HealthOut(
            status="ok",
            artifact_digest=s.artifact.corpus_digest,
            histogram_counts={"auto": auto, "user": len(s.histograms) - auto},
        )

    @app.get("/api/examples", response_model=ExamplesPage)
    def examples(offset: int = 0, limit: int = 50, entity_id: int | None = None):
        s = session()
        if offset < 0:
            raise ApiError(400, "offset must be >= 0")
        if not 1 <= limit <= 500:
            raise ApiError(400, "limit must be between 1 and 500")
        if entity_id is None:
            total = len(s.corpus)
            page = s.corpus.examples[offset : offset + limit]
        else:
            if entity_id not in s.entity_table:
                raise ApiError(404, f"unknown entity_id {entity_id}")
            postings = sorted(s.entity_table.get(entity_id).postings)
            total = len(postings)
            page = s.corpus.get_examples(postings[offset : offset + limit])
        return ExamplesPage(
            examples=[ExampleOut(id=e.id, text=e.text) for e in page],
            total=total,
            offset=offset,
            limit=limit,
        )

    @app.get("/api/histograms", response_model=list[HistogramOut])
    def histograms(sort: str = "total"):
        s = session()
        if sort not in _SORT_KEYS:
            raise ApiError(400, f"unknown sort key {sort!r}; use one of {sorted(_SORT_KEYS)}")
        ordered = sort_histograms(s.histograms, _SORT_KEYS[sort])
        return [HistogramOut.from_histogram(h) for h in ordered]

    @app.post("/api/search", response_model=list[SearchResultOut])
    def search(body: SearchRequest):
        s = session()
        if not body.query.strip():
            raise ApiError(400, "query must be non-empty")
        if body.mode == "exact":
            results = exact_search(body.query, s.histograms)
        else:
            try:
                results = semantic_search(
                    body.query,
                    s.histograms,
                    s.embed_provider,
                    s.cache,
                    s.artifact.config.semantic_threshold,
                )
            except ProviderTimeout as exc:
                raise ApiError(504, f"embedding provider timed out: {exc}") from exc
            except ProviderError as exc:
                raise ApiError(502, f"embedding provider failed: {exc}") from exc
        return [SearchResultOut.from_result(r) for r in results]

    @app.post("/api/categories", response_model=PendingCategoryOut)
    def categories(body: CategoryRequest):
        s = session()
        category = body.category.strip()
        if not category:
            raise ApiError(400, "category must be non-empty")
        try:
            candidates = generate_candidate_entities(category, s.gen_provider)
            if candidates:
                try:
                    suggestions = suggest_dataset_entities(
                        candidates,
                        s.entity_table,
                        s.embed_provider,
                        s.cache,
                        s.artifact.config.suggestion_cap,
                        s.artifact.config.suggestion_threshold,
                    )
                except EmbeddingError:
                    suggestions = []  # degenerate centroid: nothing rankable
            else:
                suggestions = []
        except ProviderTimeout as exc:
            raise ApiError(504, f"provider timed out: {exc}") from exc
        except ProviderError as exc:
            raise ApiError(502, f"provider failed: {exc}") from exc

        pending = PendingCategory(
            category=category,
            llm_examples=tuple(candidates),
            suggestions=tuple(suggestions),
        )
        with s.lock:
            s.purge_expired_pending()
            pending_id = s.next_pending_id()
            s.pending[pending_id] = PendingRecord(pending, s.clock())
        return PendingCategoryOut.from_pending(pending_id, pending)

    @app.post("/api/histograms", response_model=HistogramOut, status_code=201)
    def create_histogram(body: CreateHistogramRequest):
        s = session()
        if not body.label.strip():
            raise ApiError(400, "label must be non-empty")
        if not body.entity_ids:
            raise ApiError(400, "entity_ids must be non-empty")
        with s.lock:
            s.purge_expired_pending()
            record = s.pending.get(body.pending_id)
            if record is None:
                raise ApiError(404, f"unknown or consumed pending_id {body.pending_id!r}")
            offered = {sug.entity_id for sug in record.pending.suggestions}
            foreign = [i for i in body.entity_ids if i not in offered]
            if foreign:
                raise ApiError(
                    400, f"entity_ids {foreign} are not among the pending suggestions"
                )
            histogram = create_user_histogram(
                body.label,
                body.entity_ids,
                s.entity_table,
                s.corpus,
                s.next_user_sequence(),
            )
            del s.pending[body.pending_id]
            s.histograms.append(histogram)
            s.artifact.user_histograms.append(histogram)
            if s.artifact_path is not None:
                save_artifact(s.artifact, s.artifact_path)
        return HistogramOut.from_histogram(histogram)

    static_dir = Path(server_config.static_dir) if server_config.static_dir else None
    if static_dir is not None and static_dir.is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
