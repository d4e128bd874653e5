"""Persistence of the complete analysis artifact as one JSON document.

Serialization is byte-deterministic: keys are sorted, floats carry at
most 9 significant digits, and writes go to a temp file renamed into
place. Loading re-checks the structural invariants so a served artifact
is known-good before any request touches it.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from .config import PipelineConfig, pipeline_config_from_dict, pipeline_config_to_dict
from .corpus import Corpus
from .extraction import Entity, EntityTable
from .histogram import AUTO, USER, Bucket, Histogram

SCHEMA_VERSION = 1


class StoreError(Exception):
    pass


@dataclass
class EmbeddingSection:
    provider: str = ""
    dimension: int = 0
    vectors: dict[str, list[float]] = field(default_factory=dict)


@dataclass
class AnalysisArtifact:
    corpus_digest: str
    config: PipelineConfig
    entity_table: EntityTable
    embeddings: EmbeddingSection
    auto_histograms: list[Histogram]
    user_histograms: list[Histogram]
    run_report: dict
    schema_version: int = SCHEMA_VERSION

    @property
    def histograms(self) -> list[Histogram]:
        return list(self.auto_histograms) + list(self.user_histograms)


def _round9(value: float) -> float:
    return float(f"{value:.9g}")


def _jsonable(value):
    if isinstance(value, float):
        return _round9(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _histogram_to_dict(h: Histogram) -> dict:
    return {
        "id": h.id,
        "label": h.label,
        "source": h.source,
        "total_count": h.total_count,
        "entropy": h.entropy,
        "buckets": [
            {"entity_id": b.entity_id, "surface": list(b.surface), "count": b.count}
            for b in h.buckets
        ],
    }


def artifact_to_dict(artifact: AnalysisArtifact) -> dict:
    return {
        "schema_version": artifact.schema_version,
        "corpus_digest": artifact.corpus_digest,
        "config": pipeline_config_to_dict(artifact.config),
        "entities": [
            {
                "id": e.id,
                "surface": list(e.surface),
                "frequency": e.frequency,
                "postings": list(e.postings),
            }
            for e in artifact.entity_table
        ],
        "embeddings": {
            "provider": artifact.embeddings.provider,
            "dimension": artifact.embeddings.dimension,
            "vectors": artifact.embeddings.vectors,
        },
        "auto_histograms": [_histogram_to_dict(h) for h in artifact.auto_histograms],
        "user_histograms": [_histogram_to_dict(h) for h in artifact.user_histograms],
        "run_report": artifact.run_report,
    }


def save_artifact(artifact: AnalysisArtifact, path: str | Path) -> None:
    """Write the artifact atomically; identical artifacts, identical bytes."""
    path = Path(path)
    payload = json.dumps(
        _jsonable(artifact_to_dict(artifact)),
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=False,
    )
    try:
        fd, tmp_name = tempfile.mkstemp(
            dir=path.parent, prefix=path.name, suffix=".tmp"
        )
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(payload)
            fh.write("\n")
        os.replace(tmp_name, path)
    except OSError as exc:
        raise StoreError(f"cannot write artifact to {path}: {exc}") from exc


def _check(condition: bool, message: str) -> None:
    if not condition:
        raise StoreError(f"artifact invariant violated: {message}")


def _histogram_from_dict(raw: dict, entities_by_id: dict[int, Entity]) -> Histogram:
    hist_id = raw["id"]
    buckets = []
    for b in raw["buckets"]:
        surface = tuple(b["surface"])
        count = b["count"]
        where = f"bucket {' '.join(surface)!r} of histogram {hist_id!r}"
        entity = entities_by_id.get(b["entity_id"])
        if entity is not None and entity.surface == surface:
            _check(
                count == len(entity.postings),
                f"{where} has count {count}, but the entity has {len(entity.postings)} postings",
            )
        else:
            inline = b.get("postings")
            _check(
                inline is not None,
                f"{where} references no table entity and carries no inline postings",
            )
            _check(
                count == len(inline),
                f"{where} has count {count}, but {len(inline)} inline postings",
            )
        _check(count >= 1, f"{where} has a zero count")
        buckets.append(Bucket(b["entity_id"], surface, count))

    _check(len(buckets) >= 1, f"histogram {hist_id!r} has no buckets")
    counts = [b.count for b in buckets]
    total = sum(counts)
    _check(
        raw["total_count"] == total,
        f"histogram {hist_id!r} total_count {raw['total_count']} != bucket sum {total}",
    )
    # 1e-6 absorbs the 9-significant-digit rounding applied at save time
    entropy = raw["entropy"]
    recomputed = -sum(c / total * math.log(c / total) for c in counts)
    _check(
        abs(entropy - recomputed) <= 1e-6,
        f"histogram {hist_id!r} entropy {entropy} does not match its buckets "
        f"(recomputed {recomputed:.9g})",
    )
    _check(
        -1e-6 <= entropy <= math.log(len(buckets)) + 1e-6,
        f"histogram {hist_id!r} entropy {entropy} outside [0, ln(buckets)]",
    )
    _check(
        raw["source"] in (AUTO, USER),
        f"histogram {hist_id!r} has unknown source {raw['source']!r}",
    )
    return Histogram(
        id=hist_id,
        label=raw["label"],
        buckets=tuple(buckets),
        source=raw["source"],
        total_count=raw["total_count"],
        entropy=entropy,
    )


def load_artifact(path: str | Path) -> AnalysisArtifact:
    """Parse and invariant-check a saved artifact."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text("utf-8"))
    except OSError as exc:
        raise StoreError(f"cannot read artifact {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise StoreError(f"artifact {path} is not valid JSON: {exc}") from exc

    version = raw.get("schema_version")
    if version != SCHEMA_VERSION:
        raise StoreError(
            f"artifact schema_version {version} does not match this reader "
            f"(expected {SCHEMA_VERSION}); re-run the pipeline"
        )

    config = pipeline_config_from_dict(raw["config"])

    entities = []
    seen_surfaces = set()
    for position, e in enumerate(raw["entities"]):
        surface = tuple(e["surface"])
        _check(e["id"] == position, f"entity ids must be dense; {e['id']} at row {position}")
        _check(len(surface) >= 1, f"entity {e['id']} has an empty surface")
        _check(surface not in seen_surfaces, f"duplicate entity surface {' '.join(surface)!r}")
        seen_surfaces.add(surface)
        postings = tuple(e["postings"])
        _check(
            all(a < b for a, b in zip(postings, postings[1:])),
            f"entity {' '.join(surface)!r} postings are not strictly increasing",
        )
        _check(
            e["frequency"] >= len(postings) >= 1,
            f"entity {' '.join(surface)!r} has frequency {e['frequency']} "
            f"but {len(postings)} postings",
        )
        entities.append(Entity(e["id"], surface, e["frequency"], postings))
    _check(len(entities) <= config.k_cap, "entity table exceeds its k_cap")
    table = EntityTable(entities, config.k_cap)

    by_id = {e.id: e for e in entities}
    auto = [_histogram_from_dict(h, by_id) for h in raw["auto_histograms"]]
    user = [_histogram_from_dict(h, by_id) for h in raw["user_histograms"]]
    ids = [h.id for h in auto + user]
    _check(len(ids) == len(set(ids)), "histogram ids are not unique")

    emb_raw = raw["embeddings"]
    embeddings = EmbeddingSection(
        provider=emb_raw["provider"],
        dimension=emb_raw["dimension"],
        vectors=dict(emb_raw["vectors"]),
    )
    for text, vec in embeddings.vectors.items():
        _check(
            len(vec) == embeddings.dimension,
            f"cached embedding for {text!r} has dimension {len(vec)}",
        )

    return AnalysisArtifact(
        corpus_digest=raw["corpus_digest"],
        config=config,
        entity_table=table,
        embeddings=embeddings,
        auto_histograms=auto,
        user_histograms=user,
        run_report=raw["run_report"],
        schema_version=version,
    )


def validate_against_corpus(artifact: AnalysisArtifact, corpus: Corpus) -> None:
    """The artifact serves exactly one corpus: digests must match."""
    if artifact.corpus_digest != corpus.source_digest:
        raise StoreError(
            "artifact/corpus digest mismatch: the artifact was built from "
            f"{artifact.corpus_digest} but this corpus hashes to "
            f"{corpus.source_digest}; re-run the analysis pipeline for this corpus"
        )
