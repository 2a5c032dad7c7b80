"""DBSCAN and the automatic (eps, min_pts) rule.

``min_pts`` counts the point itself. Neighbourhoods are tested on squared
distances against ``eps**2``, which orders pairs exactly as plain Euclidean
distance does. A border point joins the cluster of its lowest-index core
neighbour, so labels do not depend on the scan order.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree

from ..errors import ConfigError, DataError
from ..neighbors import kth_neighbor_distance
from .base import ClusteringResult, as_points, log_rule


def knee_index(sorted_dists) -> int:
    """Index of the point farthest from the chord joining the first and last points.

    The curve is ``(i, sorted_dists[i])``; ties resolve to the smallest index.
    """
    d = np.asarray(sorted_dists, dtype=float)
    m = d.size
    if m < 3:
        return 0
    rise = d[-1] - d[0]
    run = m - 1
    i = np.arange(m)
    dist = np.abs(rise * i - run * (d - d[0])) / np.hypot(rise, run)
    return int(np.argmax(dist))


def dbscan_auto_params(points) -> tuple[float, int]:
    """``min_pts`` from the log rule and ``eps`` at the knee of the k-distance plot (k = min_pts)."""
    x = as_points(points)
    n_pts = x.shape[0]
    if n_pts < 3:
        raise DataError("automatic DBSCAN parameters need at least 3 points")
    min_pts = log_rule(n_pts)
    kd = np.sort(kth_neighbor_distance(x, min(min_pts, n_pts - 1)))
    return float(kd[knee_index(kd)]), min_pts


def region_queries(x: np.ndarray, eps: float) -> list[np.ndarray]:
    """Indices within ``eps`` of each point (self included), ascending."""
    tree = cKDTree(x)
    # slightly widened search, then an exact squared-distance filter
    cand = tree.query_ball_point(x, r=eps * (1 + 1e-9) + 1e-300, return_sorted=True)
    eps2 = eps * eps
    out = []
    for i, c in enumerate(cand):
        c = np.asarray(c, dtype=np.int64)
        d = x[c] - x[i]
        out.append(c[np.einsum("ij,ij->i", d, d) <= eps2])
    return out


def dbscan(points, eps: float, min_pts: int) -> ClusteringResult:
    x = as_points(points)
    if not eps > 0:
        raise ConfigError(f"eps must be positive, got {eps}")
    if min_pts < 1:
        raise ConfigError(f"min_pts must be >= 1, got {min_pts}")
    n_pts = x.shape[0]
    nbrs = region_queries(x, eps)
    core = np.array([len(nb) >= min_pts for nb in nbrs])

    labels = np.full(n_pts, -1, dtype=np.int64)
    n_clusters = 0
    for seed in np.flatnonzero(core):
        if labels[seed] >= 0:
            continue
        labels[seed] = n_clusters
        stack = [seed]
        while stack:
            p = stack.pop()
            for q in nbrs[p]:
                if core[q] and labels[q] < 0:
                    labels[q] = n_clusters
                    stack.append(q)
        n_clusters += 1

    for p in np.flatnonzero(~core):
        core_nbrs = nbrs[p][core[nbrs[p]]]
        if core_nbrs.size:
            labels[p] = labels[core_nbrs.min()]

    return ClusteringResult(
        labels=labels,
        n_clusters=n_clusters,
        method="dbscan",
        params={"eps": float(eps), "min_pts": int(min_pts), "metric": "euclidean (squared comparison)"},
        metadata={"core": core, "noise_fraction": float(np.mean(labels == -1))},
    )
