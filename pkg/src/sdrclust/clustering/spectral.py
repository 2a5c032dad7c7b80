"""Spectral clustering on a symmetrised, binary kNN graph.

Embedding: eigenvectors of the k smallest eigenvalues of the symmetric
normalised Laplacian ``I - D^-1/2 W D^-1/2``, rows scaled to unit length,
then k-means.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import eigsh

from ..neighbors import knn as knn_search
from .base import ClusteringResult, as_points, check_k, log_rule
from .kmeans import kmeans

DENSE_LIMIT = 2500


def knn_graph(x: np.ndarray, n_neighbors: int) -> sp.csr_matrix:
    """Binary adjacency with an edge i-j when either lists the other among its neighbours."""
    n_pts = x.shape[0]
    idx, _ = knn_search(x, min(n_neighbors, n_pts - 1))
    rows = np.repeat(np.arange(n_pts), idx.shape[1])
    w = sp.csr_matrix((np.ones(rows.size), (rows, idx.ravel())), shape=(n_pts, n_pts))
    w = ((w + w.T) > 0).astype(float)
    return w.tocsr()


def _normalized_adjacency(w: sp.csr_matrix) -> sp.csr_matrix:
    deg = np.asarray(w.sum(axis=1)).ravel()
    inv_sqrt = 1.0 / np.sqrt(deg)
    return sp.diags(inv_sqrt) @ w @ sp.diags(inv_sqrt)


def normalized_laplacian(points, n_neighbors: int | None = None) -> sp.csr_matrix:
    x = as_points(points)
    if n_neighbors is None:
        n_neighbors = log_rule(x.shape[0])
    a = _normalized_adjacency(knn_graph(x, n_neighbors))
    return (sp.identity(x.shape[0], format="csr") - a).tocsr()


def smallest_laplacian_eigs(a: sp.csr_matrix, k: int, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """k smallest eigenpairs of ``I - a`` where ``a`` is the normalised adjacency."""
    n_pts = a.shape[0]
    if n_pts <= DENSE_LIMIT or k >= n_pts - 1:
        mu, vec = np.linalg.eigh(a.toarray())
        mu, vec = mu[::-1][:k], vec[:, ::-1][:, :k]
    else:
        v0 = np.random.default_rng(seed).uniform(0.5, 1.5, n_pts)
        mu, vec = eigsh(a, k=k, which="LA", v0=v0, ncv=min(n_pts, max(2 * k + 1, 40)), tol=1e-10)
        order = np.argsort(-mu, kind="stable")
        mu, vec = mu[order], vec[:, order]
    return 1.0 - mu, vec


def spectral(points, k: int, knn: int | None = None, seed: int = 0, replicates: int = 10) -> ClusteringResult:
    x = as_points(points)
    n_pts = x.shape[0]
    check_k(k, n_pts)
    if knn is None:
        knn = log_rule(n_pts)
    params = {"k": k, "knn": int(knn), "laplacian": "symmetric normalized", "seed": seed}
    if k == 1 or n_pts == 1:
        return ClusteringResult(np.zeros(n_pts, dtype=np.int64), 1, "spectral", params, {})

    w = knn_graph(x, knn)
    n_comp, comp = connected_components(w, directed=False)
    meta = {"n_components": int(n_comp)}
    if n_comp > k:
        meta["warning"] = f"kNN graph has {n_comp} connected components, more than k={k}"

    lam, vec = smallest_laplacian_eigs(_normalized_adjacency(w), k, seed)
    norms = np.linalg.norm(vec, axis=1, keepdims=True)
    emb = np.divide(vec, norms, out=np.zeros_like(vec), where=norms > 0)
    inner = kmeans(emb, k, replicates=replicates, seed=seed)
    meta.update(eigenvalues=lam, embedding=emb)
    return ClusteringResult(inner.labels, inner.n_clusters, "spectral", params, meta)
