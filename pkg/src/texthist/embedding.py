"""Text embeddings behind a provider contract, with caching and vector math.

Vectors are unit-norm float64 arrays. The stub provider is fully offline
and bit-deterministic: it hashes character trigrams of the normalized text
into a 64-dimensional signed count vector and L2-normalizes it, so texts
that share substrings land near each other in cosine space.
"""

from __future__ import annotations

import math
import threading
import unicodedata

import numpy as np

from .providers import ProviderError, post_json_with_retry, resolve_credentials

STUB_DIMENSION = 64

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_U64 = 1 << 64


class EmbeddingError(Exception):
    pass


def _fnv1a_64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) % _U64
    return h


def stub_embed(text: str, dimension: int = STUB_DIMENSION) -> np.ndarray:
    """Deterministic trigram-hash embedding; empty accumulation maps to e0."""
    normalized = unicodedata.normalize("NFC", text).lower()
    padded = "^" + normalized + "$"
    components = [0.0] * dimension
    for i in range(len(padded) - 2):
        h = _fnv1a_64(padded[i : i + 3].encode("utf-8"))
        sign = 1.0 if h < (1 << 63) else -1.0
        components[h % dimension] += sign
    norm_sq = 0.0
    for c in components:
        norm_sq += c * c
    if norm_sq == 0.0:
        vector = np.zeros(dimension, dtype=np.float64)
        vector[0] = 1.0
        return vector
    norm = math.sqrt(norm_sq)
    return np.array([c / norm for c in components], dtype=np.float64)


class StubEmbeddingProvider:
    """Offline provider over stub_embed; safe for concurrent use."""

    def __init__(self, dimension: int = STUB_DIMENSION, batch_size: int = 256):
        if dimension < 8:
            raise ValueError("embedding dimension must be >= 8")
        self.dimension = dimension
        self.batch_size = batch_size
        self.identity = f"stub:trigram-fnv1a:{dimension}"

    def embed(self, texts: list[str]) -> list[np.ndarray]:
        return [stub_embed(t, self.dimension) for t in texts]


class RemoteEmbeddingProvider:
    """HTTP JSON provider: {"texts": [...]} -> {"embeddings": [[...], ...]}."""

    def __init__(
        self,
        endpoint: str,
        dimension: int,
        batch_size: int = 64,
        credentials_env: str | None = None,
        timeout: float = 20.0,
    ):
        if dimension < 8:
            raise ValueError("embedding dimension must be >= 8")
        if batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        self.endpoint = endpoint
        self.dimension = dimension
        self.batch_size = batch_size
        self.credentials_env = credentials_env
        self.timeout = timeout
        self.identity = f"remote:{endpoint}:{dimension}"

    def embed(self, texts: list[str]) -> list[np.ndarray]:
        credentials = resolve_credentials(self.credentials_env)
        body = post_json_with_retry(
            self.endpoint, {"texts": texts}, credentials, self.timeout
        )
        rows = body.get("embeddings")
        if not isinstance(rows, list) or len(rows) != len(texts):
            raise ProviderError(
                f"provider returned {0 if rows is None else len(rows)} embeddings "
                f"for {len(texts)} texts"
            )
        vectors = []
        for row in rows:
            vector = np.asarray(row, dtype=np.float64)
            if vector.shape != (self.dimension,):
                raise EmbeddingError(
                    f"provider returned dimension {vector.shape}, expected ({self.dimension},)"
                )
            if not np.all(np.isfinite(vector)):
                raise EmbeddingError("provider returned non-finite components")
            norm = float(np.linalg.norm(vector))
            if norm == 0.0:
                raise EmbeddingError("provider returned a zero vector")
            vectors.append(vector / norm)
        return vectors


class EmbeddingCache:
    """Maps (provider identity, NFC-normalized text) to a vector.

    Concurrent readers are fine; writes are serialized by a lock.
    """

    def __init__(self):
        self._entries: dict[tuple[str, str], np.ndarray] = {}
        self._lock = threading.Lock()

    @staticmethod
    def _key(identity: str, text: str) -> tuple[str, str]:
        return (identity, unicodedata.normalize("NFC", text))

    def get(self, identity: str, text: str) -> np.ndarray | None:
        return self._entries.get(self._key(identity, text))

    def put(self, identity: str, text: str, vector: np.ndarray) -> None:
        with self._lock:
            self._entries[self._key(identity, text)] = vector

    def __len__(self) -> int:
        return len(self._entries)

    def items_for(self, identity: str) -> dict[str, np.ndarray]:
        return {
            text: vec for (ident, text), vec in self._entries.items() if ident == identity
        }


def embed_text(text: str, provider, cache: EmbeddingCache | None = None) -> np.ndarray:
    return embed_batch([text], provider, cache)[0]


def embed_batch(
    texts: list[str], provider, cache: EmbeddingCache | None = None
) -> list[np.ndarray]:
    """Embed texts through the cache, issuing misses in provider-sized chunks."""
    results: dict[int, np.ndarray] = {}
    misses: list[str] = []
    miss_positions: dict[str, list[int]] = {}
    for i, text in enumerate(texts):
        cached = cache.get(provider.identity, text) if cache is not None else None
        if cached is not None:
            results[i] = cached
        else:
            if text not in miss_positions:
                misses.append(text)
                miss_positions[text] = []
            miss_positions[text].append(i)

    chunk = max(1, provider.batch_size)
    for start in range(0, len(misses), chunk):
        batch = misses[start : start + chunk]
        for text, vector in zip(batch, provider.embed(batch)):
            if cache is not None:
                cache.put(provider.identity, text, vector)
            for i in miss_positions[text]:
                results[i] = vector
    return [results[i] for i in range(len(texts))]


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    """Dot product of unit vectors, clamped to [-1, 1]."""
    if a.shape != b.shape:
        raise EmbeddingError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.clip(np.dot(a, b), -1.0, 1.0))


def centroid(vectors: list[np.ndarray]) -> np.ndarray:
    """Re-normalized component-wise mean of unit vectors."""
    if not vectors:
        raise EmbeddingError("centroid of zero vectors is undefined")
    dimension = vectors[0].shape
    for v in vectors[1:]:
        if v.shape != dimension:
            raise EmbeddingError(f"dimension mismatch: {dimension} vs {v.shape}")
    mean = np.mean(np.stack(vectors), axis=0)
    norm = float(np.linalg.norm(mean))
    if norm == 0.0:
        raise EmbeddingError("degenerate input: component-wise mean is the zero vector")
    return mean / norm
