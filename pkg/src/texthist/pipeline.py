"""End-to-end analysis pipeline: extract, embed, cluster, label, count.

Produces the analysis artifact the HTTP service serves. With stub
providers the whole pipeline is free of randomness and network calls, so
repeated runs over the same corpus yield byte-identical artifacts.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field

from .clustering import ClusterSet, multi_cutoff_cluster, pairwise_distances
from .config import STUB, EmbeddingConfig, GenerationConfig, PipelineConfig
from .corpus import Corpus
from .embedding import (
    EmbeddingCache,
    RemoteEmbeddingProvider,
    StubEmbeddingProvider,
    embed_batch,
)
from .extraction import extract_entities
from .histogram import build_histogram
from .labeling import RemoteGenerator, StubGenerator, label_clusters
from .store import SCHEMA_VERSION, AnalysisArtifact, EmbeddingSection


@dataclass
class RunReport:
    warnings: list[str] = field(default_factory=list)
    entity_count: int = 0
    clusters_per_cutoff: dict[str, int] = field(default_factory=dict)
    labeled_count: int = 0
    no_label_count: int = 0
    histogram_count: int = 0
    timings: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        # timings stay out of the artifact: byte-identical re-runs matter
        # more than persisted wall-clock numbers
        return {
            "warnings": list(self.warnings),
            "entity_count": self.entity_count,
            "clusters_per_cutoff": dict(self.clusters_per_cutoff),
            "labeled_count": self.labeled_count,
            "no_label_count": self.no_label_count,
            "histogram_count": self.histogram_count,
        }


def build_embedding_provider(config: EmbeddingConfig, timeout: float = 20.0):
    if config.kind == STUB:
        return StubEmbeddingProvider(config.dimension, config.batch_size)
    return RemoteEmbeddingProvider(
        endpoint=config.endpoint,
        dimension=config.dimension,
        batch_size=config.batch_size,
        credentials_env=config.credentials_env or None,
        timeout=timeout,
    )


def build_generation_provider(config: GenerationConfig, timeout: float = 20.0):
    if config.kind == STUB:
        return StubGenerator()
    return RemoteGenerator(
        endpoint=config.endpoint,
        credentials_env=config.credentials_env or None,
        timeout=timeout,
        max_label_tokens=config.max_label_tokens,
    )


def run_analysis(
    corpus: Corpus,
    config: PipelineConfig,
    embed_provider=None,
    gen_provider=None,
    jobs: int | None = None,
) -> tuple[AnalysisArtifact, RunReport]:
    """Run the full pipeline and assemble the artifact plus its report."""
    if embed_provider is None:
        embed_provider = build_embedding_provider(config.embedding)
    if gen_provider is None:
        gen_provider = build_generation_provider(config.generation)

    report = RunReport()
    clock = time.perf_counter

    start = clock()
    table = extract_entities(corpus, config.k_cap)
    report.entity_count = len(table)
    report.timings["extract"] = clock() - start

    start = clock()
    cache = EmbeddingCache()
    surfaces = [e.surface_text for e in table]
    vectors = embed_batch(surfaces, embed_provider, cache)
    report.timings["embed"] = clock() - start

    start = clock()
    if len(vectors) >= 2:
        matrix = pairwise_distances(vectors)
        clusters = multi_cutoff_cluster(
            matrix,
            list(config.cutoffs),
            config.min_cluster_size,
            config.max_cluster_size,
            config.linkage,
        )
    else:
        clusters = ClusterSet(clusters=[], cutoffs_used=list(config.cutoffs))
    for cutoff in config.cutoffs:
        report.clusters_per_cutoff[f"{cutoff:g}"] = sum(
            1 for c in clusters.clusters if c.cutoff == cutoff
        )
    report.timings["cluster"] = clock() - start

    start = clock()
    parallelism = jobs if jobs is not None else config.generation.parallelism
    if parallelism is None:
        parallelism = os.cpu_count() or 1
    labeled = label_clusters(
        clusters,
        table,
        gen_provider,
        template_id=config.generation.prompt_template_id,
        warnings=report.warnings,
        parallelism=parallelism,
    )
    report.labeled_count = len(labeled)
    report.no_label_count = len(clusters.clusters) - len(labeled)
    report.timings["label"] = clock() - start

    start = clock()
    histograms = [build_histogram(lc, table, corpus) for lc in labeled]
    report.histogram_count = len(histograms)
    # warm the cache with label embeddings so semantic search is served
    # from the artifact
    embed_batch([h.label for h in histograms], embed_provider, cache)
    report.timings["histograms"] = clock() - start

    if config.embedding.should_persist():
        stored = {
            text: [float(x) for x in vec]
            for text, vec in cache.items_for(embed_provider.identity).items()
        }
    else:
        stored = {}
    embeddings = EmbeddingSection(
        provider=embed_provider.identity,
        dimension=embed_provider.dimension,
        vectors=stored,
    )

    artifact = AnalysisArtifact(
        corpus_digest=corpus.source_digest,
        config=config,
        entity_table=table,
        embeddings=embeddings,
        auto_histograms=histograms,
        user_histograms=[],
        run_report=report.to_dict(),
        schema_version=SCHEMA_VERSION,
    )
    return artifact, report


def summarize_report(report: RunReport) -> str:
    """Human-readable run summary for the CLI."""
    per_cutoff = ", ".join(
        f"{cutoff}: {count}" for cutoff, count in report.clusters_per_cutoff.items()
    )
    elapsed = sum(report.timings.values())
    lines = [
        f"entities extracted: {report.entity_count}",
        f"clusters per cutoff (after size filter/dedup): {per_cutoff}",
        f"clusters labeled: {report.labeled_count}; dropped as no-label: {report.no_label_count}",
        f"histograms built: {report.histogram_count}",
        f"elapsed: {elapsed:.2f}s "
        + "("
        + ", ".join(f"{k} {v:.2f}s" for k, v in report.timings.items())
        + ")",
    ]
    if report.warnings:
        lines.append(f"warnings ({len(report.warnings)}):")
        lines.extend(f"  - {w}" for w in report.warnings)
    return "\n".join(lines)
