"""Synthetic Gaussian cluster families T1..T5.

T1  equal-variance isotropic clusters, balanced sizes
T2  per-cluster sigma drawn log-uniformly from [sigma/10, sigma]
T3  skewed (geometric) cluster sizes, each at least 2% of N
T4  two close pairs of sub-clusters plus one isolated cluster;
    ``labels`` are the 3 super-classes, ``aux_labels['sublabel']`` the 5 components
T5  T1 plus i.i.d. Gaussian noise at a linear signal-to-noise variance ratio
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .dataset import Dataset
from .errors import ConfigError, DataError

FAMILIES = ("T1", "T2", "T3", "T4", "T5")

MAX_PLACEMENT_ATTEMPTS = 2000
T3_RATIO = 0.5
T3_MIN_SHARE = 0.02
T4_PAIR_GAP = 3.0


@dataclass(frozen=True)
class SynthSpec:
    family: str = "T1"
    N: int = 5000
    n: int = 20
    n_clusters: int = 5
    seed: int = 1
    snr: float = 10.0
    sigma: float = 1.0
    separation: float = 8.0  # minimum center distance, in units of sigma
    box: float = 8.0  # centers drawn uniformly from [-box, box]^n, in units of sigma

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.family == "T4" and self.n_clusters != 5:
            raise ConfigError("T4 is defined with exactly 5 components")
        if not self.N >= self.n_clusters >= 1:
            raise ConfigError(f"need N >= n_clusters >= 1, got N={self.N}, n_clusters={self.n_clusters}")
        if self.n < 1:
            raise ConfigError(f"n must be positive, got {self.n}")
        if self.snr <= 0:
            raise ConfigError(f"snr must be positive, got {self.snr}")
        if self.sigma <= 0:
            raise ConfigError(f"sigma must be positive, got {self.sigma}")
        if self.family == "T3" and self.N * T3_MIN_SHARE * self.n_clusters > self.N:
            raise ConfigError(f"T3 cannot give {self.n_clusters} clusters 2% of N each")


def place_centers(rng: np.random.Generator, count: int, n: int, min_dist: float, half_width: float) -> np.ndarray:
    """Uniform centers in a cube, rejecting any closer than ``min_dist`` to an accepted one."""
    centers = np.empty((count, n))
    placed = 0
    attempts = 0
    while placed < count:
        if attempts >= MAX_PLACEMENT_ATTEMPTS * count:
            raise DataError(
                f"could not place {count} centers {min_dist:g} apart in {n} dims; "
                "use fewer clusters or more dimensions"
            )
        attempts += 1
        c = rng.uniform(-half_width, half_width, size=n)
        if placed and np.min(np.linalg.norm(centers[:placed] - c, axis=1)) < min_dist:
            continue
        centers[placed] = c
        placed += 1
    return centers


def balanced_sizes(N: int, k: int) -> np.ndarray:
    return np.array([N // k + (i < N % k) for i in range(k)], dtype=np.int64)


def geometric_sizes(N: int, k: int, ratio: float = T3_RATIO, min_share: float = T3_MIN_SHARE) -> np.ndarray:
    """Sizes proportional to ratio**i, floored at ``min_share * N``; non-increasing, summing to N."""
    floor = math.ceil(min_share * N)
    w = ratio ** np.arange(k)
    sizes = np.maximum(np.floor(w / w.sum() * N).astype(np.int64), floor)
    sizes[0] += N - sizes.sum()
    if sizes[0] < sizes[1:].max(initial=0):
        raise ConfigError(f"cannot build a skewed allocation of {N} points into {k} clusters")
    return sizes


def _sample(rng, centers, sigmas, sizes):
    n = centers.shape[1]
    parts = [c + s * rng.standard_normal((m, n)) for c, s, m in zip(centers, sigmas, sizes)]
    labels = np.repeat(np.arange(len(sizes)), sizes)
    return np.vstack(parts), labels


def generate(spec: SynthSpec) -> Dataset:
    """Draw one dataset. Equal specs give bit-identical output."""
    signal_seq, noise_seq, order_seq = np.random.SeedSequence(spec.seed).spawn(3)
    rng = np.random.default_rng(signal_seq)
    sigma, k, n = spec.sigma, spec.n_clusters, spec.n
    min_dist = spec.separation * sigma
    half = spec.box * sigma
    meta = {"spec": asdict(spec)}
    aux = {}

    if spec.family == "T4":
        supers = place_centers(rng, 3, n, min_dist + T4_PAIR_GAP * sigma, half)
        centers = []
        for c in supers[:2]:
            u = rng.standard_normal(n)
            u *= 0.5 * T4_PAIR_GAP * sigma / np.linalg.norm(u)
            centers += [c - u, c + u]
        centers.append(supers[2])
        centers = np.array(centers)
        sigmas = np.full(5, sigma)
        sizes = balanced_sizes(spec.N, 5)
        x, sub = _sample(rng, centers, sigmas, sizes)
        labels = np.array([0, 0, 1, 1, 2])[sub]
        aux["sublabel"] = sub
    else:
        centers = place_centers(rng, k, n, min_dist, half)
        if spec.family == "T2":
            sigmas = sigma * 10.0 ** rng.uniform(-1.0, 0.0, size=k)
        else:
            sigmas = np.full(k, sigma)
        sizes = geometric_sizes(spec.N, k) if spec.family == "T3" else balanced_sizes(spec.N, k)
        x, labels = _sample(rng, centers, sigmas, sizes)

    if spec.family == "T5":
        signal_var = float(x.var(axis=0).mean())
        noise_var = signal_var / spec.snr
        x = x + math.sqrt(noise_var) * np.random.default_rng(noise_seq).standard_normal(x.shape)
        meta["signal_variance"] = signal_var
        meta["noise_variance"] = noise_var

    perm = np.random.default_rng(order_seq).permutation(spec.N)
    meta.update(centers=centers.tolist(), sigmas=sigmas.tolist(), sizes=sizes.tolist())
    return Dataset(
        points=x[perm],
        labels=labels[perm],
        name=spec.family,
        aux_labels={key: v[perm] for key, v in aux.items()},
        meta=meta,
    )
