"""k-means: k-means++ seeding, Lloyd iterations, best of several restarts by SSE."""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError
from .base import ClusteringResult, as_points, check_k


def _sq_to_centroids(x: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    # explicit differences keep the SSE trace free of cancellation noise
    out = np.empty((x.shape[0], centroids.shape[0]))
    for j, c in enumerate(centroids):
        d = x - c
        out[:, j] = np.einsum("ij,ij->i", d, d)
    return out


def kmeans_plusplus(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n_pts = x.shape[0]
    idx = [int(rng.integers(n_pts))]
    d2 = _sq_to_centroids(x, x[idx])[:, 0]
    for _ in range(1, k):
        total = d2.sum()
        if total > 0:
            nxt = int(rng.choice(n_pts, p=d2 / total))
        else:
            nxt = int(rng.integers(n_pts))
        idx.append(nxt)
        np.minimum(d2, _sq_to_centroids(x, x[nxt : nxt + 1])[:, 0], out=d2)
    return x[idx].copy()


def lloyd(x: np.ndarray, centroids: np.ndarray, max_iter: int = 100):
    """Lloyd iterations from given centroids.

    Returns ``(labels, centroids, sse, sse_trace)``; ``sse_trace[t]`` is the
    SSE right after the t-th assignment step and never increases. A cluster
    left empty is re-seeded at the point farthest from its current centroid.
    """
    c = centroids.copy()
    k = c.shape[0]
    labels = None
    trace = []
    for _ in range(max_iter):
        d2 = _sq_to_centroids(x, c)
        new = np.argmin(d2, axis=1)
        for _ in range(k):
            counts = np.bincount(new, minlength=k)
            empty = np.flatnonzero(counts == 0)
            if empty.size == 0:
                break
            own = d2[np.arange(x.shape[0]), new]
            far = int(np.argmax(own))
            c[empty[0]] = x[far]
            d2 = _sq_to_centroids(x, c)
            new = np.argmin(d2, axis=1)
        sse = float(d2[np.arange(x.shape[0]), new].sum())
        trace.append(sse)
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
        for j in range(k):
            members = x[labels == j]
            if len(members):
                c[j] = members.mean(axis=0)
    d2 = _sq_to_centroids(x, c)
    sse = float(d2[np.arange(x.shape[0]), labels].sum())
    if sse < trace[-1]:
        trace.append(sse)
    return labels, c, sse, trace


def kmeans(points, k: int, replicates: int = 10, max_iter: int = 100, seed: int = 0) -> ClusteringResult:
    """Best of ``replicates`` k-means++/Lloyd runs by within-cluster sum of squares."""
    x = as_points(points)
    check_k(k, x.shape[0])
    if replicates < 1 or max_iter < 1:
        raise ConfigError("replicates and max_iter must be positive")
    rng = np.random.default_rng(seed)
    best = None
    traces = []
    for _ in range(replicates):
        run = lloyd(x, kmeans_plusplus(x, k, rng), max_iter)
        traces.append(run[3])
        if best is None or run[2] < best[2]:
            best = run
    labels, centroids, sse, _ = best
    used = np.unique(labels)
    if used.size < k:
        # only possible with fewer than k distinct points
        labels = np.searchsorted(used, labels)
        centroids = centroids[used]
    return ClusteringResult(
        labels=labels,
        n_clusters=int(used.size),
        method="kmeans",
        params={"k": k, "replicates": replicates, "max_iter": max_iter, "seed": seed},
        metadata={"centroids": centroids, "sse": sse, "sse_traces": traces},
    )
