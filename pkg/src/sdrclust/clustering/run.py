from __future__ import annotations

from ..errors import ConfigError
from .base import METHODS, ClusteringResult
from .dbscan import dbscan, dbscan_auto_params
from .hierarchical import hc
from .kmeans import kmeans
from .spectral import spectral


def cluster(
    points,
    method: str,
    k: int | None = None,
    seed: int = 0,
    replicates: int = 10,
    max_iter: int = 100,
    eps: float | None = None,
    min_pts: int | None = None,
    knn: int | None = None,
) -> ClusteringResult:
    """Dispatch to one of the five methods.

    ``k`` is required except for DBSCAN. DBSCAN fills any missing
    ``eps``/``min_pts`` from :func:`dbscan_auto_params`.
    """
    if method not in METHODS:
        raise ConfigError(f"unknown clustering method {method!r}; choose from {METHODS}")
    if method == "dbscan":
        if eps is None or min_pts is None:
            auto_eps, auto_min = dbscan_auto_params(points)
            eps = auto_eps if eps is None else eps
            min_pts = auto_min if min_pts is None else min_pts
        return dbscan(points, eps, min_pts)
    if k is None:
        raise ConfigError(f"{method} needs the number of clusters k")
    if method == "kmeans":
        return kmeans(points, k, replicates=replicates, max_iter=max_iter, seed=seed)
    if method == "hc_complete":
        return hc(points, k, "complete")
    if method == "hc_ward":
        return hc(points, k, "ward")
    return spectral(points, k, knn=knn, seed=seed, replicates=replicates)
