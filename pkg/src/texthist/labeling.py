"""Cluster labeling through a generation-provider contract.

Each cluster's top entity surfaces go into a few-shot prompt; the
provider's reply is parsed into a short category label, or the no-label
sentinel for incoherent clusters, which drops the cluster entirely.
parse_label_response returns None for the sentinel.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np

from .clustering import Cluster, ClusterSet
from .embedding import stub_embed
from .extraction import EntityTable
from .providers import ProviderError, post_json_with_retry, resolve_credentials

MAX_LABEL_CHARS = 60
PROMPT_SURFACE_CAP = 25  # bounded prompt size even for max-size clusters

CATEGORY_PROMPT_PREFIX = "give me examples of "

# Mean of the full pairwise cosine Gram (self-pairs included, equal to the
# squared norm of the mean member vector); below this the stub declines to
# label. Distinct-pair means would mark small clusters of unrelated-but-
# valid entities, e.g. {"cancer", "flu"}, as unlabelable.
STUB_COHERENCE_THRESHOLD = 0.15

_NO_LABEL_ANSWERS = ("no label", "none")


class LabelingError(Exception):
    pass


@dataclass(frozen=True)
class LabeledCluster:
    cluster: Cluster
    label: str
    surfaces: tuple[str, ...]  # prompt order: frequency desc, then lexicographic


@lru_cache(maxsize=None)
def _load_template(template_id: str) -> str:
    path = resources.files("texthist.data.prompts").joinpath(f"{template_id}.txt")
    lines = [
        line for line in path.read_text("utf-8").splitlines()
        if not line.startswith("#")
    ]
    template = "\n".join(lines).strip("\n")
    if "{terms}" not in template:
        raise LabelingError(f"prompt template {template_id!r} lacks a {{terms}} slot")
    return template


def build_label_prompt(entity_surfaces: list[str], template_id: str = "cluster_label") -> str:
    """Deterministic few-shot prompt ending in the comma-joined target list."""
    if not entity_surfaces:
        raise LabelingError("cannot build a label prompt for zero surfaces")
    template = _load_template(template_id)
    return template.replace("{terms}", ", ".join(entity_surfaces))


def parse_label_response(raw: str) -> str | None:
    """First line, trimmed and unquoted; None for the no-label sentinel."""
    text = raw.strip()
    if not text:
        return None
    text = text.splitlines()[0].strip().strip("\"'").strip()
    if not text or text.lower() in _NO_LABEL_ANSWERS:
        return None
    return text[:MAX_LABEL_CHARS].rstrip()


class StubGenerator:
    """Offline generation provider for labeling and category expansion.

    Labeling prompts: answers "<first term> group" where the first term is
    expected to be the cluster's highest-frequency surface, or "no label"
    when the terms' stub embeddings are mutually incoherent. Category
    prompts ("give me examples of ..."): a fixed lookup table; unknown
    categories get an empty reply.
    """

    identity = "stub:generator"

    CATEGORY_FIXTURES = {
        "sexually transmitted diseases": "hiv, syphilis, herpes, chlamydia, gonorrhea",
        "infectious diseases": "covid 19, the flu, sars, measles, infection",
        "body parts": "arm, leg, heart, lung, liver, skin",
        "symptoms": "headache, fever, nausea, fatigue, cough, dizziness",
        "cancers": "melanoma, lymphoma, leukemia, carcinoma",
        "medications": "aspirin, ibuprofen, insulin, antibiotics, paracetamol",
        "musical instruments": "guitar, drums, violin, piano",
    }

    def generate(self, prompt: str) -> str:
        last_line = prompt.strip().splitlines()[-1].strip()
        if last_line.lower().startswith(CATEGORY_PROMPT_PREFIX):
            category = last_line[len(CATEGORY_PROMPT_PREFIX):].strip().lower()
            return self.CATEGORY_FIXTURES.get(category, "")
        terms = [t.strip() for t in last_line.split(",") if t.strip()]
        if not terms:
            return "no label"
        mean = np.stack([stub_embed(t) for t in terms]).mean(axis=0)
        coherence = float(np.dot(mean, mean))
        if coherence < STUB_COHERENCE_THRESHOLD:
            return "no label"
        return f"{terms[0]} group"


class RemoteGenerator:
    """HTTP JSON provider: {"prompt": "..."} -> {"text": "..."}."""

    def __init__(
        self,
        endpoint: str,
        credentials_env: str | None = None,
        timeout: float = 20.0,
        max_label_tokens: int = 12,
    ):
        if max_label_tokens < 1:
            raise ValueError("max_label_tokens must be >= 1")
        self.endpoint = endpoint
        self.credentials_env = credentials_env
        self.timeout = timeout
        self.max_label_tokens = max_label_tokens
        self.identity = f"remote:{endpoint}"

    def generate(self, prompt: str) -> str:
        credentials = resolve_credentials(self.credentials_env)
        body = post_json_with_retry(
            self.endpoint, {"prompt": prompt}, credentials, self.timeout
        )
        text = body.get("text")
        if not isinstance(text, str):
            raise ProviderError("provider response is missing the \"text\" field")
        # cap runaway generations; the parser later trims to one line anyway
        words = text.strip().split()
        if len(words) > self.max_label_tokens:
            first_line = text.strip().splitlines()[0]
            text = " ".join(first_line.split()[: self.max_label_tokens])
        return text


def cluster_surfaces(cluster: Cluster, entity_table: EntityTable) -> list[str]:
    """Cluster member surfaces ordered by (frequency desc, surface asc)."""
    entities = [entity_table.get(i) for i in cluster.entity_ids]
    entities.sort(key=lambda e: (-e.frequency, e.surface))
    return [e.surface_text for e in entities]


def label_clusters(
    cluster_set: ClusterSet,
    entity_table: EntityTable,
    provider,
    template_id: str = "cluster_label",
    warnings: list[str] | None = None,
    parallelism: int = 1,
) -> list[LabeledCluster]:
    """Label every cluster, dropping the ones the provider declines.

    Provider failures degrade to no-label with a recorded warning rather
    than aborting the run. Requests may fan out over a thread pool; output
    order always follows cluster order.
    """
    jobs = []
    for cluster in cluster_set.clusters:
        surfaces = cluster_surfaces(cluster, entity_table)[:PROMPT_SURFACE_CAP]
        jobs.append((cluster, surfaces, build_label_prompt(surfaces, template_id)))

    def call(job):
        _, _, prompt = job
        try:
            return provider.generate(prompt)
        except ProviderError as exc:
            return exc

    if parallelism > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            raw_results = list(pool.map(call, jobs))
    else:
        raw_results = [call(job) for job in jobs]

    labeled = []
    for (cluster, surfaces, _), raw in zip(jobs, raw_results):
        if isinstance(raw, ProviderError):
            if warnings is not None:
                warnings.append(
                    f"labeling failed for cluster {list(cluster.entity_ids)}: {raw}"
                )
            continue
        label = parse_label_response(raw)
        if label is None:
            continue
        labeled.append(
            LabeledCluster(cluster=cluster, label=label, surfaces=tuple(surfaces))
        )
    return labeled
