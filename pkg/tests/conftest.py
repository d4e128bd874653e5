"""Shared fixtures: bundled corpora and a pipeline run over them."""

from __future__ import annotations

from pathlib import Path

import pytest

from texthist.config import PipelineConfig
from texthist.corpus import Corpus, load_corpus
from texthist.pipeline import run_analysis

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixture_corpus() -> Corpus:
    return load_corpus(FIXTURES / "medical_chat_500.jsonl", "jsonl")


@pytest.fixture(scope="session")
def nested_corpus() -> Corpus:
    return load_corpus(FIXTURES / "nested_groups.jsonl", "jsonl")


@pytest.fixture(scope="session")
def fixture_analysis(fixture_corpus):
    """(artifact, report) for a stub-provider pipeline run over the fixture."""
    return run_analysis(fixture_corpus, PipelineConfig())


@pytest.fixture(scope="session")
def fixture_artifact(fixture_analysis):
    return fixture_analysis[0]


@pytest.fixture(scope="session")
def nested_analysis(nested_corpus):
    return run_analysis(nested_corpus, PipelineConfig())
