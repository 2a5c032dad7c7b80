from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError, DataError

METHODS = ("kmeans", "hc_complete", "hc_ward", "dbscan", "spectral")


@dataclass(frozen=True, eq=False)
class ClusteringResult:
    """Labels plus method details.

    ``params`` is JSON-ready (it goes into reports); ``metadata`` may hold
    arrays such as centroids, the merge tree, or core-point flags.
    """

    labels: np.ndarray
    n_clusters: int
    method: str
    params: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        if labels.size and labels.min() < -1:
            raise ValueError("labels must be >= -1")
        if self.method != "dbscan" and labels.size and labels.min() < 0:
            raise ValueError("noise label -1 is only produced by dbscan")
        labels.flags.writeable = False
        object.__setattr__(self, "labels", labels)

    @property
    def noise_fraction(self) -> float:
        return float(np.mean(self.labels == -1)) if self.labels.size else 0.0


def log_rule(n_points: int) -> int:
    """The ``log(N)`` neighbour-count rule: natural log, rounded, at least 2."""
    return max(2, round(math.log(n_points)))


def as_points(points) -> np.ndarray:
    x = np.asarray(getattr(points, "points", points), dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2 or x.shape[0] == 0:
        raise DataError(f"need a non-empty N x d matrix, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise DataError("points contain non-finite values")
    return x


def check_k(k: int, n_points: int) -> None:
    if not 1 <= k <= n_points:
        raise ConfigError(f"need 1 <= k <= N, got k={k}, N={n_points}")


def first_occurrence_relabel(labels: np.ndarray) -> np.ndarray:
    """Renumber non-negative labels 0,1,2,... by first appearance; -1 stays -1."""
    out = np.full(labels.shape, -1, dtype=np.int64)
    mapping: dict[int, int] = {}
    for i, v in enumerate(labels.tolist()):
        if v >= 0:
            out[i] = mapping.setdefault(v, len(mapping))
    return out
