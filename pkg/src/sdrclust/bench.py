"""Wall-clock scaling of the five clustering methods on 2-D data."""

from __future__ import annotations

import csv
import logging
import math
import statistics
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from threadpoolctl import threadpool_limits

from .clustering import METHODS, cluster
from .errors import ConfigError
from .synth import SynthSpec, generate

log = logging.getLogger(__name__)

MIN_RELIABLE_SECONDS = 1e-3
BENCH_CLUSTERS = 5


@dataclass(frozen=True)
class TimingRow:
    method: str
    N: int
    dims: int
    median_seconds: float
    repeats: int


def bench_data(n_points: int, dims: int, seed: int) -> np.ndarray:
    # wide box so five 8-sigma-separated centers fit easily in 2-D
    spec = SynthSpec("T1", N=n_points, n=dims, n_clusters=BENCH_CLUSTERS, seed=seed, box=20.0)
    return np.asarray(generate(spec).points)


def _time_once(x, method, seed) -> float:
    t0 = time.perf_counter()
    cluster(x, method, k=BENCH_CLUSTERS, seed=seed)
    return time.perf_counter() - t0


def run_scaling(sizes, dims: int = 2, repeats: int = 5, seed: int = 0, methods=METHODS) -> list[TimingRow]:
    """Median clustering time per (method, N). Sub-millisecond cells are re-timed with 10x the repeats."""
    sizes = [int(s) for s in sizes]
    if not sizes or sizes != sorted(sizes):
        raise ConfigError(f"sizes must be a non-empty ascending list, got {sizes}")
    if repeats < 3:
        raise ConfigError("repeats must be >= 3")
    rows = []
    with threadpool_limits(limits=1):
        warm = bench_data(max(64, BENCH_CLUSTERS * 4), dims, seed)
        for m in methods:
            cluster(warm, m, k=BENCH_CLUSTERS, seed=seed)  # JIT compilation outside the timed region
        for n_points in sizes:
            x = bench_data(n_points, dims, seed)
            for m in methods:
                reps = repeats
                times = [_time_once(x, m, seed) for _ in range(reps)]
                if statistics.median(times) < MIN_RELIABLE_SECONDS:
                    log.warning("%s at N=%d is below timer resolution; repeating %d times", m, n_points, 10 * repeats)
                    reps = 10 * repeats
                    times = [_time_once(x, m, seed) for _ in range(reps)]
                rows.append(TimingRow(m, n_points, dims, statistics.median(times), reps))
    return rows


def loglog_slope(rows: list[TimingRow], method: str) -> float:
    """Least-squares slope of log(time) against log(N) for one method."""
    pts = [(math.log(r.N), math.log(r.median_seconds)) for r in rows if r.method == method]
    if len(pts) < 2:
        raise ValueError(f"need at least two sizes for {method}")
    xs, ys = zip(*pts)
    return float(np.polyfit(xs, ys, 1)[0])


def write_timings(rows: list[TimingRow], path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["method", "N", "dims", "median_seconds", "repeats"])
        for r in rows:
            w.writerow([r.method, r.N, r.dims, f"{r.median_seconds:.6g}", r.repeats])
