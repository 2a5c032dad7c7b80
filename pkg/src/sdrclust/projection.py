"""Projections to low dimension: classical MDS, Landmark MDS, and PCA."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset
from .eigen import jacobi_eigh
from .errors import ConfigError, DataError, NumericError
from .neighbors import sq_dists_exact as sq_dists

log = logging.getLogger(__name__)

NEG_EIG_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class Projection:
    coords: np.ndarray
    landmark_indices: tuple[int, ...] = ()
    eigenvalues: np.ndarray = field(default_factory=lambda: np.zeros(0))
    meta: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.coords.shape[1]


def double_center(sq_dist: np.ndarray) -> np.ndarray:
    """B = -1/2 J D^2 J for a matrix of squared distances."""
    row = sq_dist.mean(axis=1, keepdims=True)
    col = sq_dist.mean(axis=0, keepdims=True)
    return -0.5 * (sq_dist - row - col + sq_dist.mean())


def _check_distance_matrix(dist: np.ndarray) -> None:
    if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
        raise DataError(f"distance matrix must be square, got shape {dist.shape}")
    scale = max(float(np.abs(dist).max()), 1.0)
    if not np.allclose(dist, dist.T, rtol=0.0, atol=1e-12 * scale):
        raise DataError("distance matrix is not symmetric")
    if np.any(np.abs(np.diag(dist)) > 1e-12 * scale):
        raise DataError("distance matrix has a non-zero diagonal")
    if np.any(dist < 0):
        raise DataError("distance matrix has negative entries")


def _mds_from_sq(sq_dist: np.ndarray, target_dim: int):
    w, v = jacobi_eigh(double_center(sq_dist))
    neg = w[w < -NEG_EIG_RTOL * max(w[0], 0.0)]
    if neg.size:
        log.info("classical MDS: %d negative eigenvalues clamped (min %.3g)", neg.size, neg.min())
    lam = np.clip(w[:target_dim], 0.0, None)
    return v[:, :target_dim], lam, w


def classical_mds(dist, target_dim: int = 2) -> tuple[np.ndarray, np.ndarray]:
    """Embed a distance matrix; returns ``(coords, eigenvalues)``.

    ``eigenvalues`` is the full descending spectrum of the double-centred Gram
    matrix; negative entries (non-Euclidean input) are clamped to zero when
    scaling coordinates.
    """
    dist = np.asarray(dist, dtype=float)
    _check_distance_matrix(dist)
    if not 1 <= target_dim <= dist.shape[0]:
        raise ConfigError(f"target_dim must be in [1, {dist.shape[0]}], got {target_dim}")
    vecs, lam, w = _mds_from_sq(dist**2, target_dim)
    return vecs * np.sqrt(lam), w


def negative_eigenvalues(eigenvalues: np.ndarray) -> np.ndarray:
    return eigenvalues[eigenvalues < -NEG_EIG_RTOL * max(eigenvalues[0], 0.0)]


def maxmin_landmarks(x: np.ndarray, n_landmarks: int, rng: np.random.Generator) -> np.ndarray:
    """Greedy farthest-point landmarks from a random start.

    Stops early if every remaining point coincides with a chosen landmark.
    """
    first = int(rng.integers(x.shape[0]))
    chosen = [first]
    mind = sq_dists(x[first : first + 1], x)[0]
    while len(chosen) < n_landmarks:
        nxt = int(np.argmax(mind))
        if mind[nxt] == 0.0:
            break
        chosen.append(nxt)
        np.minimum(mind, sq_dists(x[nxt : nxt + 1], x)[0], out=mind)
    return np.array(chosen, dtype=np.int64)


def default_landmarks(n_points: int) -> int:
    return min(n_points, max(50, round(np.sqrt(n_points))))


def lmds(data: Dataset | np.ndarray, n_landmarks: int | None = None, target_dim: int = 2, seed: int = 0) -> Projection:
    """Landmark MDS.

    Classical MDS on MaxMin-selected landmarks; every other point is placed
    by triangulation from its squared distances to the landmarks.
    """
    x = np.asarray(data.points if isinstance(data, Dataset) else data, dtype=float)
    n_pts, n_dim = x.shape
    if n_landmarks is None:
        n_landmarks = default_landmarks(n_pts)
    if not 1 <= target_dim <= n_dim:
        raise ConfigError(f"target_dim must be in [1, n={n_dim}], got {target_dim}")
    if not 3 <= n_landmarks <= n_pts:
        raise ConfigError(f"n_landmarks must be in [3, N={n_pts}], got {n_landmarks}")

    rng = np.random.default_rng(seed)
    lm = maxmin_landmarks(x, n_landmarks, rng)
    if lm.size < target_dim + 1:
        raise DataError(f"only {lm.size} distinct landmarks, need at least {target_dim + 1}")

    delta = sq_dists(x[lm], x[lm])
    vecs, lam, w = _mds_from_sq(delta, target_dim)
    if lam[0] <= 0.0:
        raise NumericError("landmark configuration has collapsed to a point")
    # pseudo-inverse of the landmark coordinates; dims with zero eigenvalue map to 0
    pinv = np.zeros((target_dim, lm.size))
    pos = lam > NEG_EIG_RTOL * lam[0]
    pinv[pos] = (vecs[:, pos] / np.sqrt(lam[pos])).T
    mean_delta = delta.mean(axis=0)
    coords = -0.5 * (sq_dists(x, x[lm]) - mean_delta) @ pinv.T

    neg = negative_eigenvalues(w)
    meta = {
        "method": "lmds",
        "n_landmarks": int(lm.size),
        "target_dim": target_dim,
        "seed": seed,
        "negative_eigenvalues": int(neg.size),
    }
    return Projection(coords=coords, landmark_indices=tuple(int(i) for i in lm), eigenvalues=w, meta=meta)


def pca_reduce(data: Dataset, variance_fraction: float = 0.8) -> tuple[Dataset, np.ndarray]:
    """Project onto the fewest leading principal components explaining ``variance_fraction``.

    Returns the reduced dataset and the full descending eigenvalue spectrum
    of the sample covariance.
    """
    if not 0.0 < variance_fraction <= 1.0:
        raise ConfigError(f"variance_fraction must be in (0, 1], got {variance_fraction}")
    if data.N < 2:
        raise DataError("PCA needs at least 2 observations")
    x = data.points - data.points.mean(axis=0)
    cov = x.T @ x / (data.N - 1)
    w, v = jacobi_eigh(cov)
    w = np.clip(w, 0.0, None)
    total = w.sum()
    if total == 0.0:
        raise DataError("all columns are constant; nothing to project")
    share = np.cumsum(w) / total
    n_nonzero = int(np.sum(w > 1e-12 * w[0]))
    n_comp = min(int(np.searchsorted(share, variance_fraction - 1e-12)) + 1, n_nonzero)
    reduced = x @ v[:, :n_comp]
    meta = dict(data.meta)
    meta["pca"] = {
        "input_dims": data.n,
        "n_components": n_comp,
        "variance_fraction_requested": variance_fraction,
        "variance_fraction_retained": float(share[n_comp - 1]),
    }
    out = data.with_points(reduced, columns=tuple(f"pc{j + 1}" for j in range(n_comp)), meta=meta)
    return out, w


def pca_project(data: Dataset | np.ndarray, target_dim: int = 2) -> Projection:
    x = np.asarray(data.points if isinstance(data, Dataset) else data, dtype=float)
    x = x - x.mean(axis=0)
    w, v = jacobi_eigh(x.T @ x / max(x.shape[0] - 1, 1))
    return Projection(coords=x @ v[:, :target_dim], eigenvalues=w, meta={"method": "pca", "target_dim": target_dim})


def project(data: Dataset, method: str = "lmds", target_dim: int = 2, n_landmarks: int | None = None, seed: int = 0) -> Projection:
    if method == "lmds":
        return lmds(data, n_landmarks=n_landmarks, target_dim=target_dim, seed=seed)
    if method == "cmds":
        dist = np.sqrt(sq_dists(data.points, data.points))
        np.fill_diagonal(dist, 0.0)
        dist = 0.5 * (dist + dist.T)
        coords, w = classical_mds(dist, target_dim)
        return Projection(coords=coords, eigenvalues=w, meta={"method": "cmds", "target_dim": target_dim})
    if method == "pca":
        return pca_project(data, target_dim)
    raise ConfigError(f"unknown projection method {method!r} (expected lmds, cmds or pca)")
