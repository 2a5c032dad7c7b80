"""Exact brute-force k-nearest-neighbour search.

Neighbours are ordered by distance, ties broken by lower point index, and a
point is never its own neighbour. Work is chunked over query rows so memory
stays at ``chunk * N`` doubles.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree

_CHUNK_CELLS = 4_000_000
_SLACK = 8


def sq_dists(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Squared Euclidean distances between rows of ``a`` and rows of ``b``."""
    d2 = (a * a).sum(1)[:, None] + (b * b).sum(1)[None, :] - 2.0 * (a @ b.T)
    np.maximum(d2, 0.0, out=d2)
    return d2


def sq_dists_exact(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Like :func:`sq_dists` but from explicit differences (no cancellation)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    out = np.empty((a.shape[0], b.shape[0]))
    chunk = max(1, _CHUNK_CELLS // max(1, b.size))
    for start in range(0, a.shape[0], chunk):
        diff = a[start : start + chunk, None, :] - b[None, :, :]
        out[start : start + chunk] = np.einsum("ijk,ijk->ij", diff, diff)
    return out


def knn(points: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(indices, distances)``, each N x k, rows sorted nearest first."""
    x = np.ascontiguousarray(points, dtype=float)
    n_pts = x.shape[0]
    if not 1 <= k < n_pts:
        raise ValueError(f"need 1 <= k < N, got k={k}, N={n_pts}")
    idx = np.empty((n_pts, k), dtype=np.int64)
    dist = np.empty((n_pts, k))
    chunk = max(1, _CHUNK_CELLS // n_pts)
    m = min(n_pts - 1, k + _SLACK)
    for start in range(0, n_pts, chunk):
        stop = min(start + chunk, n_pts)
        d2 = sq_dists(x[start:stop], x)
        rows = np.arange(stop - start)
        d2[rows, rows + start] = np.inf
        if m < n_pts - 1:
            cand = np.argpartition(d2, m - 1, axis=1)[:, :m]
        else:
            cand = np.tile(np.arange(n_pts), (stop - start, 1))
        cand.sort(axis=1)
        cd = np.take_along_axis(d2, cand, axis=1)
        order = np.argsort(cd, axis=1, kind="stable")[:, :k]
        sel = np.take_along_axis(cand, order, axis=1)
        sd = np.take_along_axis(cd, order, axis=1)
        if m < n_pts - 1:
            # a tie at the k-th distance may extend past the candidate set
            for r in np.flatnonzero(sd[:, -1] == cd.max(axis=1)):
                sel[r] = np.argsort(d2[r], kind="stable")[:k]
                sd[r] = d2[r, sel[r]]
        idx[start:stop] = sel
        dist[start:stop] = sd
    return idx, np.sqrt(dist)


def kth_neighbor_distance(points: np.ndarray, k: int) -> np.ndarray:
    """Distance from every point to its k-th nearest other point.

    Only distances are needed here, so a KD-tree query is exact regardless of
    how it orders ties.
    """
    x = np.asarray(points, dtype=float)
    if not 1 <= k < x.shape[0]:
        raise ValueError(f"need 1 <= k < N, got k={k}, N={x.shape[0]}")
    d, _ = cKDTree(x).query(x, k=k + 1)
    return d[:, -1]
