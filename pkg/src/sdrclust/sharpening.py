"""Density sharpening: pull every point toward the centroid of its k nearest neighbours.

One iteration maps each point x to ``x + step_size * (mean(kNN(x)) - x)``,
with neighbours taken from the previous iterate for all points at once.
Repeating this a fixed number of times contracts dense regions so that
clusters separate more cleanly after projection.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import ConfigError, NumericError
from .neighbors import knn

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SharpenParams:
    """``k_neighbors=None`` resolves to round(sqrt(N)) at call time.

    ``seed`` is recorded for provenance only: neighbour ties are broken by
    point index, so the update itself is deterministic.
    """

    k_neighbors: int | None = None
    step_size: float = 0.3
    iterations: int = 10
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.step_size <= 1.0:
            raise ConfigError(f"step_size must be in (0, 1], got {self.step_size}")
        if self.iterations < 0:
            raise ConfigError(f"iterations must be >= 0, got {self.iterations}")
        if self.k_neighbors is not None and self.k_neighbors < 1:
            raise ConfigError(f"k_neighbors must be positive, got {self.k_neighbors}")

    def resolve_k(self, n_points: int) -> int:
        k = self.k_neighbors if self.k_neighbors is not None else max(1, round(math.sqrt(n_points)))
        if k >= n_points:
            raise ConfigError(f"k_neighbors={k} must be smaller than N={n_points}")
        return k


def sharpen_step(x: np.ndarray, k: int, step_size: float) -> tuple[np.ndarray, float]:
    """One synchronous update. Also returns sum of distances to the kNN centroids before the move."""
    idx, _ = knn(x, k)
    centroids = x[idx].mean(axis=1)
    shift = centroids - x
    residual = float(np.sqrt((shift * shift).sum(axis=1)).sum())
    return x + step_size * shift, residual


def sharpen_trace(points, params: SharpenParams) -> tuple[np.ndarray, list[float]]:
    """Run the iterations; returns final points and the per-iteration kNN-centroid residuals.

    The residual list has ``iterations + 1`` entries, the last one measured on
    the output.
    """
    x = np.array(points, dtype=float)
    if params.iterations == 0:
        return x, []
    k = params.resolve_k(x.shape[0])
    residuals = []
    for it in range(params.iterations):
        x, res = sharpen_step(x, k, params.step_size)
        residuals.append(res)
        if not np.all(np.isfinite(x)):
            raise NumericError(f"non-finite coordinates after sharpening iteration {it + 1}")
    _, res = sharpen_step(x, k, params.step_size)
    residuals.append(res)
    log.debug("sharpen k=%d alpha=%g residuals %s", k, params.step_size, residuals)
    return x, residuals


def sharpen(data: Dataset, params: SharpenParams = SharpenParams()) -> Dataset:
    if params.iterations == 0:
        return data
    x = np.array(data.points, dtype=float)
    k = params.resolve_k(data.N)
    for it in range(params.iterations):
        x, _ = sharpen_step(x, k, params.step_size)
        if not np.all(np.isfinite(x)):
            raise NumericError(f"non-finite coordinates after sharpening iteration {it + 1}")
    meta = dict(data.meta)
    meta["sharpen"] = {"k_neighbors": k, "step_size": params.step_size, "iterations": params.iterations}
    return data.with_points(x, meta=meta)
