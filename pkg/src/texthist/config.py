"""Pipeline and server configuration with file loading and overrides.

Precedence: CLI flags override config-file values, which override the
built-in defaults. The config file is JSON with optional "pipeline" and
"server" sections; unknown keys are rejected to catch typos early.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

from .clustering import DEFAULT_CUTOFFS, DEFAULT_MAX_SIZE, DEFAULT_MIN_SIZE
from .corpus import DEFAULT_MAX_EXAMPLES
from .embedding import STUB_DIMENSION
from .extraction import DEFAULT_K_CAP
from .query import (
    DEFAULT_SEMANTIC_THRESHOLD,
    DEFAULT_SUGGESTION_CAP,
    DEFAULT_SUGGESTION_THRESHOLD,
)

STUB = "stub"
REMOTE = "remote"


class ConfigError(Exception):
    pass


@dataclass
class EmbeddingConfig:
    kind: str = STUB
    dimension: int = STUB_DIMENSION
    endpoint: str = ""
    credentials_env: str = ""
    batch_size: int = 64
    persist_cache: bool | None = None  # None: persist for stub only

    def should_persist(self) -> bool:
        if self.persist_cache is None:
            return self.kind == STUB
        return self.persist_cache


@dataclass
class GenerationConfig:
    kind: str = STUB
    endpoint: str = ""
    credentials_env: str = ""
    max_label_tokens: int = 12
    prompt_template_id: str = "cluster_label"
    parallelism: int | None = None  # None: one worker per available processor


@dataclass
class PipelineConfig:
    k_cap: int = DEFAULT_K_CAP
    cutoffs: tuple[float, ...] = DEFAULT_CUTOFFS
    linkage: str = "average"
    min_cluster_size: int = DEFAULT_MIN_SIZE
    max_cluster_size: int = DEFAULT_MAX_SIZE
    semantic_threshold: float = DEFAULT_SEMANTIC_THRESHOLD
    suggestion_cap: int = DEFAULT_SUGGESTION_CAP
    suggestion_threshold: float = DEFAULT_SUGGESTION_THRESHOLD
    max_examples: int = DEFAULT_MAX_EXAMPLES
    embedding: EmbeddingConfig = field(default_factory=EmbeddingConfig)
    generation: GenerationConfig = field(default_factory=GenerationConfig)

    def validate(self) -> None:
        if self.k_cap < 1:
            raise ConfigError("k_cap must be >= 1")
        if not self.cutoffs or any(
            b <= a for a, b in zip(self.cutoffs, self.cutoffs[1:])
        ):
            raise ConfigError("cutoffs must be non-empty and strictly increasing")
        if any(not 0.0 < c <= 2.0 for c in self.cutoffs):
            raise ConfigError("cutoffs must lie in (0, 2]")
        if self.min_cluster_size < 1 or self.max_cluster_size < self.min_cluster_size:
            raise ConfigError("need 1 <= min_cluster_size <= max_cluster_size")
        if self.embedding.dimension < 8:
            raise ConfigError("embedding dimension must be >= 8")
        if self.embedding.batch_size < 1:
            raise ConfigError("embedding batch_size must be >= 1")
        if self.generation.max_label_tokens < 1:
            raise ConfigError("max_label_tokens must be >= 1")
        for section in (self.embedding, self.generation):
            if section.kind not in (STUB, REMOTE):
                raise ConfigError(f"provider kind must be {STUB!r} or {REMOTE!r}")
            if section.kind == REMOTE and not section.endpoint:
                raise ConfigError("remote providers need an endpoint")


@dataclass
class ServerConfig:
    host: str = "127.0.0.1"
    port: int = 8080
    cors_origins: tuple[str, ...] = ("*",)
    provider_timeout: float = 20.0
    pending_ttl: float = 1800.0  # seconds a pending category survives
    compress_min_bytes: int = 8192
    static_dir: str = ""  # built web UI assets, served at / when set


@dataclass
class AppConfig:
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)
    server: ServerConfig = field(default_factory=ServerConfig)


def _apply_section(target, values: dict, section: str):
    known = {f.name: f for f in dataclasses.fields(target)}
    for key, value in values.items():
        if key not in known:
            raise ConfigError(f"unknown key {key!r} in config section {section!r}")
        current = getattr(target, key)
        if dataclasses.is_dataclass(current):
            if not isinstance(value, dict):
                raise ConfigError(f"{section}.{key} must be an object")
            _apply_section(current, value, f"{section}.{key}")
        elif isinstance(current, tuple) and isinstance(value, list):
            setattr(target, key, tuple(value))
        else:
            setattr(target, key, value)


def load_config(path: str | Path | None) -> AppConfig:
    """Build an AppConfig from defaults plus an optional JSON file."""
    config = AppConfig()
    if path is None:
        return config
    path = Path(path)
    try:
        raw = json.loads(path.read_text("utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a JSON object")
    for section, values in raw.items():
        if section == "pipeline":
            _apply_section(config.pipeline, values, "pipeline")
        elif section == "server":
            _apply_section(config.server, values, "server")
        else:
            raise ConfigError(f"unknown config section {section!r}")
    config.pipeline.validate()
    return config


def pipeline_config_to_dict(config: PipelineConfig) -> dict:
    """Plain-JSON snapshot of the pipeline config (stored in artifacts)."""
    out = dataclasses.asdict(config)
    out["cutoffs"] = list(config.cutoffs)
    return out


def pipeline_config_from_dict(raw: dict) -> PipelineConfig:
    config = PipelineConfig()
    _apply_section(config, raw, "pipeline")
    config.validate()
    return config
