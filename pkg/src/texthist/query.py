"""Histogram search and the live human-in-the-loop histogram creation flow.

Search is exact (case-insensitive substring over labels and bucket
surfaces) or semantic (cosine between the query embedding and label
embeddings), with exact matches always ranked first. New histograms are
created by expanding a category through a generation provider, ranking
dataset entities against the centroid of the generated terms, and letting
the user pick which suggestions to keep.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .corpus import Corpus
from .embedding import EmbeddingCache, centroid, cosine_similarity, embed_batch, embed_text
from .extraction import EntityTable
from .histogram import USER, Histogram, assemble_histogram
from .labeling import CATEGORY_PROMPT_PREFIX

EXACT = "exact"
SEMANTIC = "semantic"

DEFAULT_SEMANTIC_THRESHOLD = 0.5
DEFAULT_SUGGESTION_CAP = 30
DEFAULT_SUGGESTION_THRESHOLD = 0.35
CANDIDATE_CAP = 20

_LIST_MARKER_RE = re.compile(r"^\s*(?:[-*•]+|\d+[.)])\s*")


class QueryError(Exception):
    pass


@dataclass(frozen=True)
class SearchResult:
    histogram_id: str
    score: float  # in [0, 1]; exact matches score 1.0
    match_kind: str  # EXACT or SEMANTIC


@dataclass(frozen=True)
class EntitySuggestion:
    entity_id: int
    surface: tuple[str, ...]
    similarity: float

    @property
    def surface_text(self) -> str:
        return " ".join(self.surface)


@dataclass(frozen=True)
class PendingCategory:
    category: str
    llm_examples: tuple[str, ...]
    suggestions: tuple[EntitySuggestion, ...]  # similarity desc, capped


def _sort_results(results: list[SearchResult], histograms: list[Histogram]) -> list[SearchResult]:
    labels = {h.id: h.label for h in histograms}
    return sorted(
        results,
        key=lambda r: (
            0 if r.match_kind == EXACT else 1,
            -r.score,
            labels[r.histogram_id],
        ),
    )


def exact_search(query: str, histograms: list[Histogram]) -> list[SearchResult]:
    """Substring match of the query against labels and bucket surfaces."""
    needle = query.strip().lower()
    if not needle:
        return []
    results = [
        SearchResult(h.id, 1.0, EXACT)
        for h in histograms
        if needle in h.label.lower()
        or any(needle in b.surface_text for b in h.buckets)
    ]
    return _sort_results(results, histograms)


def semantic_search(
    query: str,
    histograms: list[Histogram],
    embed_provider,
    cache: EmbeddingCache | None = None,
    threshold: float = DEFAULT_SEMANTIC_THRESHOLD,
) -> list[SearchResult]:
    """Exact matches first, then label-embedding matches above threshold."""
    if not query.strip():
        raise QueryError("semantic search needs a non-empty query")
    merged = exact_search(query, histograms)
    seen = {r.histogram_id for r in merged}

    query_vec = embed_text(query, embed_provider, cache)
    label_vecs = embed_batch([h.label for h in histograms], embed_provider, cache)
    scored = []
    for h, vec in zip(histograms, label_vecs):
        if h.id in seen:
            continue
        score = cosine_similarity(query_vec, vec)
        if score >= threshold:
            scored.append(SearchResult(h.id, min(max(score, 0.0), 1.0), SEMANTIC))
    return merged + _sort_results(scored, histograms)


def generate_candidate_entities(category: str, gen_provider) -> list[str]:
    """Ask the provider for example entities of a category.

    The reply is split on newlines and commas, list markers are stripped,
    and items are trimmed, lowercased, deduplicated, and capped at 20.
    The items may or may not occur in the dataset.
    """
    if not category.strip():
        raise QueryError("category must be non-empty")
    prompt = f"{CATEGORY_PROMPT_PREFIX}{category.strip()}"
    raw = gen_provider.generate(prompt)
    items: list[str] = []
    seen: set[str] = set()
    for line in raw.splitlines():
        line = _LIST_MARKER_RE.sub("", line)
        for piece in line.split(","):
            item = piece.strip().lower()
            if item and item not in seen:
                seen.add(item)
                items.append(item)
            if len(items) >= CANDIDATE_CAP:
                return items
    return items


def suggest_dataset_entities(
    candidates: list[str],
    entity_table: EntityTable,
    embed_provider,
    cache: EmbeddingCache | None = None,
    m: int = DEFAULT_SUGGESTION_CAP,
    threshold: float = DEFAULT_SUGGESTION_THRESHOLD,
) -> list[EntitySuggestion]:
    """Rank table entities by cosine to the candidates' centroid, top m."""
    if not candidates:
        raise QueryError("need at least one candidate entity")
    candidate_vecs = embed_batch(candidates, embed_provider, cache)
    center = centroid(candidate_vecs)

    surfaces = [e.surface_text for e in entity_table]
    entity_vecs = embed_batch(surfaces, embed_provider, cache)
    ranked = sorted(
        (
            EntitySuggestion(e.id, e.surface, cosine_similarity(center, vec))
            for e, vec in zip(entity_table, entity_vecs)
        ),
        key=lambda s: (-s.similarity, s.entity_id),
    )
    return [s for s in ranked if s.similarity >= threshold][:m]


def create_user_histogram(
    label: str,
    selected_entity_ids: list[int],
    entity_table: EntityTable,
    corpus: Corpus,
    sequence: int,
) -> Histogram:
    """Histogram over the user's selected entities, id "user-<sequence>"."""
    if not label.strip():
        raise QueryError("histogram label must be non-empty")
    if not selected_entity_ids:
        raise QueryError("select at least one entity")
    entities = [entity_table.get(i) for i in selected_entity_ids]
    return assemble_histogram(
        label.strip(), entities, corpus, source=USER, histogram_id=f"user-{sequence}"
    )
