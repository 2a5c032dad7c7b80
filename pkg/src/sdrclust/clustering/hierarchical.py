"""Agglomerative clustering with complete or Ward linkage.

Merges are found with the nearest-neighbour chain, which yields the same
dendrogram as repeatedly merging the globally closest pair for these two
(reducible) linkages. Dissimilarities live in a condensed upper-triangle
array of squared Euclidean distances and are updated with the Lance-Williams
recurrences. Ties go to the lower point index.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .base import ClusteringResult, as_points, check_k
from ..errors import ConfigError

LINKAGES = ("complete", "ward")


@njit(cache=True, inline="always")
def _ci(i, j, n):
    if i > j:
        i, j = j, i
    return n * i - (i * (i + 1)) // 2 + j - i - 1


@njit(cache=True)
def _condensed_sq(x):
    n, d = x.shape
    out = np.empty(n * (n - 1) // 2)
    t = 0
    for i in range(n):
        for j in range(i + 1, n):
            s = 0.0
            for c in range(d):
                diff = x[i, c] - x[j, c]
                s += diff * diff
            out[t] = s
            t += 1
    return out


@njit(cache=True)
def _nn_chain(dist, n, ward):
    size = np.ones(n, dtype=np.int64)
    active = np.ones(n, dtype=np.bool_)
    chain = np.empty(n, dtype=np.int64)
    merges = np.empty((n - 1, 2), dtype=np.int64)
    heights = np.empty(n - 1)
    top = 0
    for step in range(n - 1):
        if top == 0:
            for i in range(n):
                if active[i]:
                    chain[0] = i
                    break
            top = 1
        while True:
            a = chain[top - 1]
            b = -1
            best = np.inf
            for i in range(n):
                if i == a or not active[i]:
                    continue
                dv = dist[_ci(a, i, n)]
                if dv < best:
                    best = dv
                    b = i
            # the chain predecessor wins ties, which guarantees termination
            if top > 1 and dist[_ci(a, chain[top - 2], n)] == best:
                b = chain[top - 2]
            if top > 1 and b == chain[top - 2]:
                break
            chain[top] = b
            top += 1
        a = chain[top - 1]
        b = chain[top - 2]
        top -= 2
        lo, hi = (a, b) if a < b else (b, a)
        merges[step, 0] = lo
        merges[step, 1] = hi
        heights[step] = best
        # merged cluster is stored at the lower index
        na, nb = size[lo], size[hi]
        dab = best
        for k in range(n):
            if not active[k] or k == lo or k == hi:
                continue
            dka = dist[_ci(k, lo, n)]
            dkb = dist[_ci(k, hi, n)]
            if ward:
                nk = size[k]
                nd = ((na + nk) * dka + (nb + nk) * dkb - nk * dab) / (na + nb + nk)
            else:
                nd = dka if dka > dkb else dkb
            dist[_ci(k, lo, n)] = nd
        active[hi] = False
        size[lo] = na + nb
    return merges, heights


def linkage_tree(points, linkage: str = "complete") -> tuple[np.ndarray, np.ndarray]:
    """Full merge tree as ``(merges, heights)`` in non-decreasing height order.

    ``merges[t] = (i, j)`` joins the clusters currently represented by point
    indices ``i < j``; the union is represented by ``i`` afterwards. Heights
    are Euclidean for complete linkage and the Ward distance
    ``sqrt(2 n_a n_b / (n_a + n_b)) * ||c_a - c_b||`` for Ward.
    """
    if linkage not in LINKAGES:
        raise ConfigError(f"linkage must be one of {LINKAGES}, got {linkage!r}")
    x = np.ascontiguousarray(as_points(points))
    n = x.shape[0]
    if n == 1:
        return np.empty((0, 2), dtype=np.int64), np.empty(0)
    dist = _condensed_sq(x)
    merges, heights = _nn_chain(dist, n, linkage == "ward")
    order = np.argsort(heights, kind="stable")
    return merges[order], np.sqrt(heights[order])


def to_scipy_linkage(merges: np.ndarray, heights: np.ndarray) -> np.ndarray:
    """Convert to the (N-1) x 4 linkage-matrix layout used by scipy."""
    n = len(merges) + 1
    cid = np.arange(n)
    size = np.ones(n, dtype=np.int64)
    z = np.empty((n - 1, 4))
    for t, (i, j) in enumerate(merges):
        a, b = sorted((cid[i], cid[j]))
        z[t] = a, b, heights[t], size[i] + size[j]
        size[i] += size[j]
        cid[i] = n + t
    return z


def cut_tree(merges: np.ndarray, n_points: int, k: int) -> np.ndarray:
    """Labels after applying the first ``n_points - k`` merges, numbered by first appearance."""
    parent = np.arange(n_points)

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in merges[: n_points - k]:
        ri, rj = find(i), find(j)
        parent[max(ri, rj)] = min(ri, rj)
    roots = np.array([find(i) for i in range(n_points)])
    _, first, inverse = np.unique(roots, return_index=True, return_inverse=True)
    rank = np.argsort(np.argsort(first))
    return rank[inverse].astype(np.int64)


def hc(points, k: int, linkage: str = "complete") -> ClusteringResult:
    x = as_points(points)
    check_k(k, x.shape[0])
    merges, heights = linkage_tree(x, linkage)
    labels = cut_tree(merges, x.shape[0], k)
    return ClusteringResult(
        labels=labels,
        n_clusters=k,
        method=f"hc_{linkage}",
        params={"k": k, "linkage": linkage, "metric": "euclidean"},
        metadata={"merges": merges, "heights": heights},
    )
