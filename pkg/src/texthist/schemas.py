"""Pydantic request/response models for the HTTP API."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

from .histogram import Histogram
from .query import EntitySuggestion, PendingCategory, SearchResult


class ExampleOut(BaseModel):
    id: int
    text: str


class ExamplesPage(BaseModel):
    examples: list[ExampleOut]
    total: int
    offset: int
    limit: int


class BucketOut(BaseModel):
    entity_id: int
    surface: str
    count: int


class HistogramOut(BaseModel):
    id: str
    label: str
    source: Literal["auto", "user"]
    total_count: int
    entropy: float
    buckets: list[BucketOut]

    @classmethod
    def from_histogram(cls, h: Histogram) -> "HistogramOut":
        return cls(
            id=h.id,
            label=h.label,
            source=h.source,
            total_count=h.total_count,
            entropy=h.entropy,
            buckets=[
                BucketOut(entity_id=b.entity_id, surface=b.surface_text, count=b.count)
                for b in h.buckets
            ],
        )


class SearchRequest(BaseModel):
    query: str = Field(min_length=1)
    mode: Literal["exact", "semantic"] = "exact"


class SearchResultOut(BaseModel):
    histogram_id: str
    score: float
    match_kind: Literal["exact", "semantic"]

    @classmethod
    def from_result(cls, r: SearchResult) -> "SearchResultOut":
        return cls(histogram_id=r.histogram_id, score=r.score, match_kind=r.match_kind)


class CategoryRequest(BaseModel):
    category: str = Field(min_length=1)


class SuggestionOut(BaseModel):
    entity_id: int
    surface: str
    similarity: float

    @classmethod
    def from_suggestion(cls, s: EntitySuggestion) -> "SuggestionOut":
        return cls(entity_id=s.entity_id, surface=s.surface_text, similarity=s.similarity)


class PendingCategoryOut(BaseModel):
    id: str
    category: str
    llm_examples: list[str]
    suggestions: list[SuggestionOut]

    @classmethod
    def from_pending(cls, pending_id: str, p: PendingCategory) -> "PendingCategoryOut":
        return cls(
            id=pending_id,
            category=p.category,
            llm_examples=list(p.llm_examples),
            suggestions=[SuggestionOut.from_suggestion(s) for s in p.suggestions],
        )


class CreateHistogramRequest(BaseModel):
    pending_id: str
    label: str = Field(min_length=1)
    entity_ids: list[int] = Field(min_length=1)


class HealthOut(BaseModel):
    status: str
    artifact_digest: str
    histogram_counts: dict[str, int]
