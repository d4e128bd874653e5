"""Command-line entry points: analyze a corpus, serve it, inspect artifacts.

The CLI stays thin: it parses flags, resolves config precedence
(flags > config file > defaults), and delegates to the pipeline, store,
and service modules.

Exit codes for analyze: 1 config error, 2 corpus error, 3 provider error.
"""

from __future__ import annotations

import logging
import socket
import sys

import click

from .config import ConfigError, load_config
from .corpus import CORPUS_FORMATS, CorpusError, load_corpus
from .extraction import ExtractionError
from .histogram import SORT_ENTROPY, SORT_TOTAL, sort_histograms
from .pipeline import run_analysis, summarize_report
from .providers import ProviderError
from .service import build_session_state, create_app
from .store import StoreError, load_artifact, save_artifact, validate_against_corpus

EXIT_CONFIG = 1
EXIT_CORPUS = 2
EXIT_PROVIDER = 3


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


@click.group()
def main():
    """Derive entity histograms from a text corpus and explore them."""


@main.command()
@click.argument("corpus_path", type=click.Path())
@click.option("--format", "corpus_format", type=click.Choice(CORPUS_FORMATS), default="jsonl")
@click.option("--out", "out_path", required=True, type=click.Path(), help="Artifact output path.")
@click.option("--k", type=int, default=None, help="Entity table cap (default 2000).")
@click.option("--cutoffs", default=None, help="Comma-separated clustering cutoffs.")
@click.option("--min-size", type=int, default=None, help="Smallest cluster kept.")
@click.option("--max-size", type=int, default=None, help="Largest cluster kept.")
@click.option("--provider", type=click.Choice(["stub", "remote"]), default=None,
              help="Embedding and generation provider kind.")
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--jobs", type=int, default=None, help="Labeling request parallelism.")
def analyze(corpus_path, corpus_format, out_path, k, cutoffs, min_size, max_size,
            provider, config_path, jobs):
    """Run the full pipeline over CORPUS_PATH and write the artifact."""
    try:
        config = load_config(config_path)
        pipeline = config.pipeline
        if k is not None:
            pipeline.k_cap = k
        if cutoffs is not None:
            try:
                pipeline.cutoffs = tuple(float(c) for c in cutoffs.split(",") if c.strip())
            except ValueError as exc:
                raise ConfigError(f"bad --cutoffs value {cutoffs!r}: {exc}") from exc
        if min_size is not None:
            pipeline.min_cluster_size = min_size
        if max_size is not None:
            pipeline.max_cluster_size = max_size
        if provider is not None:
            pipeline.embedding.kind = provider
            pipeline.generation.kind = provider
        pipeline.validate()
    except ConfigError as exc:
        _fail(EXIT_CONFIG, str(exc))

    try:
        corpus = load_corpus(corpus_path, corpus_format, max_examples=pipeline.max_examples)
    except CorpusError as exc:
        _fail(EXIT_CORPUS, str(exc))

    try:
        artifact, report = run_analysis(corpus, pipeline, jobs=jobs)
    except ExtractionError as exc:
        _fail(EXIT_CORPUS, str(exc))
    except ProviderError as exc:
        _fail(EXIT_PROVIDER, str(exc))

    try:
        save_artifact(artifact, out_path)
    except StoreError as exc:
        _fail(EXIT_CONFIG, str(exc))

    click.echo(summarize_report(report))
    click.echo(f"artifact written to {out_path}")


@main.command()
@click.option("--artifact", "artifact_path", required=True, type=click.Path())
@click.option("--corpus", "corpus_path", required=True, type=click.Path())
@click.option("--format", "corpus_format", type=click.Choice(CORPUS_FORMATS), default="jsonl")
@click.option("--port", type=int, default=None, help="Port to bind (default 8080).")
@click.option("--host", default=None, help="Host to bind (default 127.0.0.1).")
@click.option("--ui-dir", default=None, type=click.Path(),
              help="Built web UI assets to serve at /.")
@click.option("--config", "config_path", type=click.Path(), default=None)
def serve(artifact_path, corpus_path, corpus_format, port, host, ui_dir, config_path):
    """Serve the HTTP API for an artifact/corpus pair."""
    try:
        config = load_config(config_path)
    except ConfigError as exc:
        _fail(EXIT_CONFIG, str(exc))
    if port is not None:
        config.server.port = port
    if host is not None:
        config.server.host = host
    if ui_dir is not None:
        config.server.static_dir = ui_dir

    try:
        artifact = load_artifact(artifact_path)
        corpus = load_corpus(corpus_path, corpus_format, max_examples=artifact.config.max_examples)
        validate_against_corpus(artifact, corpus)
    except (StoreError, CorpusError, ConfigError) as exc:
        _fail(EXIT_CONFIG, str(exc))

    # surface an occupied port before uvicorn takes over the process
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        probe.bind((config.server.host, config.server.port))
    except OSError as exc:
        _fail(EXIT_CONFIG, f"cannot bind {config.server.host}:{config.server.port}: {exc}")
    finally:
        probe.close()

    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(name)s %(message)s")
    state = build_session_state(artifact, corpus, config.server, artifact_path)
    app = create_app(state)

    import uvicorn

    click.echo(
        f"serving {corpus.name!r} ({len(corpus)} examples, "
        f"{len(state.histograms)} histograms) on "
        f"http://{config.server.host}:{config.server.port}"
    )
    uvicorn.run(app, host=config.server.host, port=config.server.port, log_level="warning")


@main.command()
@click.option("--artifact", "artifact_path", required=True, type=click.Path())
@click.option("--top", type=int, default=10, help="Rows per table.")
def inspect(artifact_path, top):
    """Print the top histograms by total count and by entropy."""
    try:
        artifact = load_artifact(artifact_path)
    except StoreError as exc:
        _fail(EXIT_CONFIG, str(exc))

    def table(title: str, key: str):
        click.echo(title)
        click.echo(f"{'label':<40} {'id':<18} {'total':>7} {'entropy':>8} {'buckets':>8}")
        for h in sort_histograms(artifact.histograms, key)[: max(top, 0)]:
            click.echo(
                f"{h.label[:40]:<40} {h.id:<18} {h.total_count:>7} "
                f"{h.entropy:>8.3f} {len(h.buckets):>8}"
            )
        click.echo("")

    table("top histograms by total count", SORT_TOTAL)
    table("top histograms by entropy", SORT_ENTROPY)


if __name__ == "__main__":
    main()
