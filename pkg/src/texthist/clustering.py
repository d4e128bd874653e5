"""Agglomerative clustering of entity embeddings at multiple cutoffs.

Clusters merge bottom-up under average linkage until the smallest
inter-cluster distance exceeds the cutoff. Running several cutoffs and
keeping every surviving cluster lets one entity belong to several
candidate groups, which is what makes overlapping histograms possible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .embedding import EmbeddingError

LINKAGES = ("average", "complete", "single")

DEFAULT_CUTOFFS = (0.2, 0.35, 0.5, 0.65, 0.8)
DEFAULT_MIN_SIZE = 3
DEFAULT_MAX_SIZE = 50


class ClusteringError(Exception):
    pass


@dataclass(frozen=True)
class Cluster:
    entity_ids: tuple[int, ...]  # sorted ascending
    cutoff: float


@dataclass
class ClusterSet:
    clusters: list[Cluster]
    cutoffs_used: list[float] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.clusters)


def pairwise_distances(vectors: list[np.ndarray]) -> np.ndarray:
    """Symmetric matrix of cosine distances 1 - cos(v_i, v_j)."""
    if len(vectors) < 2:
        raise ClusteringError("need at least 2 vectors for a distance matrix")
    dimension = vectors[0].shape
    for v in vectors[1:]:
        if v.shape != dimension:
            raise EmbeddingError(f"dimension mismatch: {dimension} vs {v.shape}")
    stacked = np.stack(vectors)
    distances = 1.0 - stacked @ stacked.T
    distances = (distances + distances.T) / 2.0  # force exact symmetry
    np.clip(distances, 0.0, 2.0, out=distances)
    np.fill_diagonal(distances, 0.0)
    return distances


def agglomerate(matrix: np.ndarray, cutoff: float, linkage: str = "average") -> list[Cluster]:
    """Merge clusters while the minimum linkage distance stays <= cutoff.

    Each cluster lives at the slot of its smallest entity id, and the
    minimal pair is chosen with ties broken by the lexicographically
    smallest (slot_i, slot_j) — so results are fully deterministic.
    """
    if not 0.0 < cutoff <= 2.0:
        raise ClusteringError(f"cutoff must be in (0, 2], got {cutoff}")
    if linkage not in LINKAGES:
        raise ClusteringError(f"unknown linkage {linkage!r}; expected one of {LINKAGES}")
    n = matrix.shape[0]
    if matrix.shape != (n, n):
        raise ClusteringError(f"distance matrix must be square, got {matrix.shape}")

    # current[i, j] holds the linkage distance between the clusters at
    # slots i and j; sums[i, j] the total cross-pair distance (average
    # linkage divides it by the pair count on every update).
    current = matrix.astype(np.float64).copy()
    sums = matrix.astype(np.float64).copy()
    sizes = np.ones(n, dtype=np.float64)
    members: dict[int, list[int]] = {i: [i] for i in range(n)}
    np.fill_diagonal(current, np.inf)

    active_count = n
    while active_count > 1:
        # argmin over the full symmetric matrix scans row-major, so the
        # first hit is the smallest (i, j) pair with i < j among ties
        flat = int(np.argmin(current))
        i, j = divmod(flat, n)
        if current[i, j] > cutoff:
            break
        if i > j:
            i, j = j, i

        if linkage == "average":
            sums[i, :] += sums[j, :]
            sums[:, i] = sums[i, :]
            sizes[i] += sizes[j]
            pair_counts = sizes[i] * sizes
            with np.errstate(invalid="ignore"):
                row = sums[i, :] / pair_counts
        elif linkage == "complete":
            row = np.maximum(current[i, :], current[j, :])
        else:
            row = np.minimum(current[i, :], current[j, :])

        inactive = np.isinf(current[i, :]) | np.isinf(current[j, :])
        row[inactive] = np.inf
        current[i, :] = row
        current[:, i] = row
        current[i, i] = np.inf
        current[j, :] = np.inf
        current[:, j] = np.inf

        members[i].extend(members.pop(j))
        active_count -= 1

    return [
        Cluster(entity_ids=tuple(sorted(ids)), cutoff=cutoff)
        for _, ids in sorted(members.items())
    ]


def multi_cutoff_cluster(
    matrix: np.ndarray,
    cutoffs: list[float] = DEFAULT_CUTOFFS,
    min_size: int = DEFAULT_MIN_SIZE,
    max_size: int = DEFAULT_MAX_SIZE,
    linkage: str = "average",
) -> ClusterSet:
    """Union of agglomerate() runs, size-filtered and deduplicated.

    A duplicate entity-id set keeps the cluster from the smallest cutoff.
    An entity may appear in several surviving clusters.
    """
    if not cutoffs:
        raise ClusteringError("cutoffs must be non-empty")
    if any(b <= a for a, b in zip(cutoffs, cutoffs[1:])):
        raise ClusteringError(f"cutoffs must be strictly increasing, got {list(cutoffs)}")

    survivors: dict[tuple[int, ...], Cluster] = {}
    for cutoff in cutoffs:
        for cluster in agglomerate(matrix, cutoff, linkage):
            if not min_size <= len(cluster.entity_ids) <= max_size:
                continue
            if cluster.entity_ids not in survivors:
                survivors[cluster.entity_ids] = cluster
    return ClusterSet(clusters=list(survivors.values()), cutoffs_used=list(cutoffs))
