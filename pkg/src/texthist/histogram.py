"""Histograms of per-entity example counts, with sorting and bucket drill-down.

A bucket's count is document frequency: the number of distinct examples
whose token stream contains the entity's surface as a contiguous
subsequence. Raw substring matches do not count ("cancer" never matches
inside "cancerous").
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass

from .corpus import Corpus
from .extraction import Entity, EntityTable, Token, tokenize
from .labeling import LabeledCluster

AUTO = "auto"
USER = "user"

SORT_TOTAL = "total"
SORT_ENTROPY = "entropy"
SORT_KEYS = (SORT_TOTAL, SORT_ENTROPY)


class HistogramError(Exception):
    pass


@dataclass(frozen=True)
class Bucket:
    entity_id: int
    surface: tuple[str, ...]
    count: int

    @property
    def surface_text(self) -> str:
        return " ".join(self.surface)


@dataclass(frozen=True)
class Histogram:
    id: str
    label: str
    buckets: tuple[Bucket, ...]  # sorted by (count desc, surface asc)
    source: str  # AUTO or USER
    total_count: int
    entropy: float

    def bucket_for(self, entity_id: int) -> Bucket | None:
        for bucket in self.buckets:
            if bucket.entity_id == entity_id:
                return bucket
        return None


def contains_entity(example_tokens: list[Token], surface: tuple[str, ...]) -> bool:
    """True iff surface occurs as a contiguous token subsequence."""
    if not surface:
        raise ValueError("entity surface must have at least one token")
    token_surfaces = [t.surface for t in example_tokens]
    span = len(surface)
    target = list(surface)
    for start in range(len(token_surfaces) - span + 1):
        if token_surfaces[start : start + span] == target:
            return True
    return False


def compute_postings(corpus: Corpus, surface: tuple[str, ...]) -> tuple[int, ...]:
    """Brute-force posting list via contains_entity over the whole corpus."""
    return tuple(
        ex.id for ex in corpus.examples if contains_entity(tokenize(ex.text), surface)
    )


def shannon_entropy(counts: list[int]) -> float:
    """Natural-log entropy of the count distribution."""
    total = sum(counts)
    entropy = 0.0
    for c in counts:
        p = c / total
        entropy -= p * math.log(p)
    return entropy


def auto_histogram_id(label: str, surfaces: list[str]) -> str:
    """Content-derived id: stable across identical re-runs."""
    payload = json.dumps([label, sorted(surfaces)], ensure_ascii=True)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


def make_buckets(
    entities: list[Entity], corpus: Corpus
) -> list[Bucket]:
    """One bucket per entity; zero-count entities are dropped."""
    buckets = []
    for entity in entities:
        postings = entity.postings
        if not postings:
            postings = compute_postings(corpus, entity.surface)
        if not postings:
            continue
        buckets.append(Bucket(entity.id, entity.surface, len(postings)))
    buckets.sort(key=lambda b: (-b.count, b.surface))
    return buckets


def assemble_histogram(
    label: str,
    entities: list[Entity],
    corpus: Corpus,
    source: str = AUTO,
    histogram_id: str | None = None,
) -> Histogram:
    """Assemble a histogram over the given entities.

    AUTO histograms get a content-derived id; USER callers pass their own.
    """
    if not label:
        raise HistogramError("histogram label must be non-empty")
    buckets = make_buckets(entities, corpus)
    if not buckets:
        raise HistogramError(f"histogram {label!r} has no non-empty buckets")
    counts = [b.count for b in buckets]
    if histogram_id is None:
        histogram_id = auto_histogram_id(label, [b.surface_text for b in buckets])
    return Histogram(
        id=histogram_id,
        label=label,
        buckets=tuple(buckets),
        source=source,
        total_count=sum(counts),
        entropy=shannon_entropy(counts),
    )


def build_histogram(
    labeled: LabeledCluster, entity_table: EntityTable, corpus: Corpus
) -> Histogram:
    """Histogram for a labeled cluster: one bucket per member entity."""
    entities = [entity_table.get(i) for i in labeled.cluster.entity_ids]
    return assemble_histogram(labeled.label, entities, corpus, source=AUTO)


def sort_histograms(histograms: list[Histogram], key: str = SORT_TOTAL) -> list[Histogram]:
    """Descending by total count or entropy; ties by label then id."""
    if key not in SORT_KEYS:
        raise ValueError(f"unknown sort key {key!r}; expected one of {SORT_KEYS}")
    if key == SORT_TOTAL:
        metric = lambda h: h.total_count
    else:
        metric = lambda h: h.entropy
    return sorted(histograms, key=lambda h: (-metric(h), h.label, h.id))


def select_bucket(
    histogram: Histogram, entity_id: int, entity_table: EntityTable
) -> list[int]:
    """Example ids behind one bucket, ascending: exactly the posting list."""
    if histogram.bucket_for(entity_id) is None:
        raise KeyError(
            f"entity id {entity_id} has no bucket in histogram {histogram.id!r}"
        )
    entity = entity_table.get(entity_id)
    return sorted(entity.postings)
