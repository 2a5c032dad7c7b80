"""Acceptance gate: one test per criterion, each recording a PASS/FAIL line.

The lines are printed in the "acceptance criteria" section of the pytest
terminal summary. Criteria 4 and 5 need the UCI WiFi and HAR exports; point
``SDRCLUST_DATA`` at a directory holding ``wifi.csv`` (label column ``room``)
and ``har.csv`` (label column ``activity``), as written by
``scripts/prepare_uci.py``.
"""

from __future__ import annotations

import os
import statistics
import time
from pathlib import Path

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from oracles import aligned, brute_dbscan, exhaustive_kmeans, naive_agglomerative, pairwise, sse
from sdrclust.bench import loglog_slope, run_scaling
from sdrclust.clustering import METHODS, dbscan, hc, kmeans, knee_index, log_rule, normalized_laplacian, spectral
from sdrclust.clustering.kmeans import kmeans_plusplus, lloyd
from sdrclust.dataset import Dataset
from sdrclust.metrics import accuracy, brute_force_matched_count, matched_count, nmi, purity
from sdrclust.pipeline import DatasetSource, PipelineConfig, run_pipeline
from sdrclust.projection import classical_mds, pca_reduce
from sdrclust.synth import SynthSpec

DATA_DIR = Path(os.environ.get("SDRCLUST_DATA", Path(__file__).resolve().parents[1] / "data"))


def record(number: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def random_pair(rng, n=100, max_k=6):
    kp, kg = rng.integers(1, max_k + 1, size=2)
    return rng.integers(0, kp, n), rng.integers(0, kg, n)


# ---------------------------------------------------------------- 1


def test_criterion_1_metric_oracle_equivalence():
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    mismatches = 0
    for _ in range(500):
        pred, truth = random_pair(rng)
        # compare matched counts: the integer numerators of both accuracies
        if matched_count(pred, truth) != brute_force_matched_count(pred, truth):
            mismatches += 1
    elapsed = time.perf_counter() - t0
    record(1, mismatches == 0 and elapsed < 10, f"500 pairs, {mismatches} mismatches, {elapsed:.2f}s (limit 10s)")


# ---------------------------------------------------------------- 2


def test_criterion_2_metric_properties():
    rng = np.random.default_rng(2)
    bad = []
    worst_sym = 0.0
    for i in range(1000):
        pred, truth = random_pair(rng)
        a, p, m = accuracy(pred, truth), purity(pred, truth), nmi(pred, truth)
        if not (p >= a and all(0.0 <= v <= 1.0 for v in (a, p, m))):
            bad.append(i)
        if len(np.unique(pred)) > 1 and nmi(pred, pred) != 1.0:
            bad.append(i)
        worst_sym = max(worst_sym, abs(m - nmi(truth, pred)))
    ok = not bad and worst_sym <= 1e-12
    record(2, ok, f"1000 pairs, {len(bad)} violations, max |nmi(L,G)-nmi(G,L)| = {worst_sym:.2e} (limit 1e-12)")


# ---------------------------------------------------------------- 3


def test_criterion_3_synthetic_kmeans():
    t0 = time.perf_counter()
    sources = [
        DatasetSource(f, synth=SynthSpec(f, N=1000, n=20, n_clusters=5), resample=True)
        for f in ("T1", "T2", "T3", "T5")
    ]
    sources.append(DatasetSource("T4", synth=SynthSpec("T4", N=1000, n=20), resample=True))
    sources.append(DatasetSource("T4-sub", synth=SynthSpec("T4", N=1000, n=20), resample=True, truth="sublabel"))
    cfg = PipelineConfig(datasets=sources, conditions=("slmds",), methods=("kmeans",), runs=10, seed=1)
    res = run_pipeline(cfg, write=False)
    elapsed = time.perf_counter() - t0
    parts, ok = [], True
    for src in sources:
        med = {m: statistics.median(res.scores(src.name, "slmds", "kmeans", m)) for m in ("accuracy", "purity", "nmi")}
        gated = src.name != "T4-sub"
        if gated:
            ok &= all(v >= 0.90 for v in med.values())
        tag = "" if gated else " (exempt)"
        parts.append(f"{src.name}{tag} acc={med['accuracy']:.3f} pur={med['purity']:.3f} nmi={med['nmi']:.3f}")
    ok &= elapsed < 300
    record(3, ok, "; ".join(parts) + f"; {elapsed:.1f}s (limit 300s)")


# ---------------------------------------------------------------- 4


def _real(name: str) -> Path | None:
    p = DATA_DIR / name
    return p if p.is_file() else None


def test_criterion_4_wifi_ordering():
    path = _real("wifi.csv")
    if path is None:
        record(4, False, f"WiFi data not found at {DATA_DIR / 'wifi.csv'}; set SDRCLUST_DATA (see scripts/prepare_uci.py)")
    t0 = time.perf_counter()
    cfg = PipelineConfig(
        datasets=[DatasetSource("wifi", path=str(path), label_col="room")],
        methods=("kmeans", "hc_ward"),
        runs=10,
    )
    res = run_pipeline(cfg, write=False)
    elapsed = time.perf_counter() - t0
    reference = {"kmeans": (0.9160, 0.9395), "hc_ward": (0.9040, 0.9395)}
    ok, parts = elapsed < 120, []
    for method, (p_lmds, p_slmds) in reference.items():
        lm = statistics.median(res.scores("wifi", "lmds", method))
        sl = statistics.median(res.scores("wifi", "slmds", method))
        ok &= sl > lm and abs(lm - p_lmds) <= 0.06 and abs(sl - p_slmds) <= 0.06
        parts.append(f"{method} LMDS={lm:.4f} (reference {p_lmds}) SLMDS={sl:.4f} (reference {p_slmds})")
    record(4, ok, "; ".join(parts) + f"; {elapsed:.1f}s (limit 120s)")


# ---------------------------------------------------------------- 5


def test_criterion_5_har_saturation():
    path = _real("har.csv")
    if path is None:
        record(5, False, f"HAR data not found at {DATA_DIR / 'har.csv'}; set SDRCLUST_DATA (see scripts/prepare_uci.py)")
    cfg = PipelineConfig(
        datasets=[DatasetSource("har", path=str(path), label_col="activity", regroup="har", pca_variance=0.8)],
        conditions=("slmds",),
        methods=("kmeans",),
        runs=5,
    )
    res = run_pipeline(cfg, write=False)
    pca = res.dataset_info["har"]["pca"]
    med = {m: statistics.median(res.scores("har", "slmds", "kmeans", m)) for m in ("accuracy", "purity", "nmi")}
    ok = med["accuracy"] >= 0.95 and med["purity"] >= 0.95 and med["nmi"] >= 0.90
    record(
        5,
        ok,
        f"PCA {pca['input_dims']} -> {pca['n_components']} dims retaining {pca['variance_fraction_retained']:.4f} "
        f"(reference count 10); acc={med['accuracy']:.4f} pur={med['purity']:.4f} nmi={med['nmi']:.4f}",
    )


# ---------------------------------------------------------------- 6


def _blob_instance(rng, n, k):
    centers = rng.uniform(-5, 5, size=(k, 2))
    return centers[rng.integers(0, k, n)] + rng.normal(scale=0.5, size=(n, 2))


def test_criterion_6_small_instance_oracles():
    rng = np.random.default_rng(6)
    fails = {"kmeans": 0, "hc_complete": 0, "hc_ward": 0, "dbscan": 0, "spectral": 0}
    for t in range(200):
        n = int(rng.integers(2, 9))
        k = int(rng.integers(1, min(n, 4) + 1))
        x = _blob_instance(rng, n, k)
        if sse(x, kmeans(x, k, seed=t).labels) > exhaustive_kmeans(x, k)[1] * (1 + 1e-9) + 1e-12:
            fails["kmeans"] += 1
        y = rng.normal(size=(n, 2))
        for link in ("complete", "ward"):
            if not aligned(hc(y, k, link).labels, naive_agglomerative(y, k, link)[0]):
                fails[f"hc_{link}"] += 1
    for _ in range(100):
        n = int(rng.integers(5, 51))
        x = rng.uniform(0, 10, size=(n, 2))
        eps, min_pts = float(rng.uniform(0.5, 3.0)), int(rng.integers(2, 6))
        if not aligned(dbscan(x, eps, min_pts).labels, brute_dbscan(x, eps, min_pts)[0]):
            fails["dbscan"] += 1
    for t in range(20):
        k = int(rng.integers(2, 5))
        sizes = rng.integers(10, 30, k)
        centers = np.arange(k)[:, None] * np.array([100.0, 0.0])
        x = np.vstack([c + rng.normal(size=(s, 2)) for s, c in zip(sizes, centers)])
        truth = np.repeat(np.arange(k), sizes)
        if not aligned(spectral(x, k, knn=4, seed=t).labels, truth):
            fails["spectral"] += 1
    ok = not any(fails.values())
    record(6, ok, "failures per oracle " + ", ".join(f"{m}={v}" for m, v in fails.items()))


# ---------------------------------------------------------------- 7


def test_criterion_7_numerical_properties():
    rng = np.random.default_rng(7)
    worst_mds = 0.0
    for _ in range(20):
        x = rng.normal(size=(int(rng.integers(5, 40)), 2)) * rng.uniform(0.1, 100)
        d = pairwise(x)
        y, _ = classical_mds(d, 2)
        worst_mds = max(worst_mds, float(np.abs(pairwise(y) - d).max() / d.max()))
    pca_ok = True
    for _ in range(20):
        frac = float(rng.uniform(0.1, 1.0))
        x = rng.normal(size=(80, 10)) * rng.uniform(0.1, 5, 10)
        out, _ = pca_reduce(Dataset(x), frac)
        pca_ok &= out.meta["pca"]["variance_fraction_retained"] >= frac - 1e-12
    sse_bad = 0
    for _ in range(100):
        x = rng.normal(size=(int(rng.integers(10, 200)), 2))
        k = int(rng.integers(2, 8))
        trace = lloyd(x, kmeans_plusplus(x, k, rng), 100)[3]
        sse_bad += any(b > a for a, b in zip(trace, trace[1:]))
    lo, hi = np.inf, -np.inf
    for _ in range(20):
        ev = np.linalg.eigvalsh(normalized_laplacian(rng.normal(size=(int(rng.integers(10, 150)), 2))).toarray())
        lo, hi = min(lo, ev.min()), max(hi, ev.max())
    ok = worst_mds <= 1e-6 and pca_ok and sse_bad == 0 and lo >= -1e-9 and hi <= 2 + 1e-9
    record(
        7,
        ok,
        f"MDS max rel err {worst_mds:.1e} (limit 1e-6); PCA share ok={pca_ok}; "
        f"SSE increases in {sse_bad}/100 traces; Laplacian spectrum [{lo:.2e}, {hi:.6f}]",
    )


# ---------------------------------------------------------------- 8


def test_criterion_8_knee_rule():
    got = []
    for values, idx, eps in (([1, 1, 1, 1, 10], 3, 1.0), ([1, 2, 3, 4, 5], 0, 1.0)):
        i = knee_index(values)
        got.append(i == idx and values[i] == eps)
    rules = {n: log_rule(n) for n in (100, 2981, 24075)}
    ok = all(got) and rules == {100: 5, 2981: 8, 24075: 10}
    record(8, ok, f"knee examples ok={got}; min_pts {rules}")


# ---------------------------------------------------------------- 9


@pytest.mark.slow
def test_criterion_9_timing_ordering():
    t0 = time.perf_counter()
    rows = run_scaling([2**10, 2**12, 2**14], dims=2, repeats=3, seed=0)
    elapsed = time.perf_counter() - t0
    at_max = {r.method: r.median_seconds for r in rows if r.N == 2**14}
    fastest = min(at_max, key=at_max.get)
    strictly = all(at_max["kmeans"] < v for m, v in at_max.items() if m != "kmeans")
    slopes = {m: loglog_slope(rows, m) for m in METHODS}
    hc_ok = slopes["hc_complete"] > slopes["kmeans"] and slopes["hc_ward"] > slopes["kmeans"]
    ok = strictly and hc_ok and elapsed < 600
    record(
        9,
        ok,
        f"N=16384 medians " + ", ".join(f"{m}={v:.3f}s" for m, v in at_max.items())
        + f" (fastest {fastest}); slopes " + ", ".join(f"{m}={s:.2f}" for m, s in slopes.items())
        + f"; {elapsed:.0f}s (limit 600s)",
    )


# ---------------------------------------------------------------- 10


def test_criterion_10_determinism(tmp_path):
    def once(out):
        src = DatasetSource("t4", synth=SynthSpec("T4", N=600, n=10, seed=5))
        run_pipeline(PipelineConfig(datasets=[src], runs=2, seed=3, out_dir=str(out)))
        root = out / "datasets"
        return {str(p.relative_to(root)): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}

    a, b = once(tmp_path / "a"), once(tmp_path / "b")
    kinds = {s: sum(k.endswith(s) for k in a) for s in ("_labels.csv", "_report.json", ".svg")}
    differing = sorted(k for k in a if a[k] != b.get(k))
    ok = a.keys() == b.keys() and not differing and all(kinds.values())
    record(10, ok, f"{len(a)} files compared {kinds}; differing: {differing or 'none'}")
