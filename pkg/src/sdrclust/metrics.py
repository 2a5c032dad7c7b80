"""External validation of a labelling against ground truth: accuracy, purity, NMI.

All three work off the confusion matrix. The DBSCAN noise label -1 gets its
own row: under accuracy it can never be matched, so noise points count as
errors; under purity it is scored like any other cluster by its majority
class; under NMI it is one more cluster.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import DataError

NOISE = -1
MAX_BRUTE_FORCE_CLUSTERS = 8


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    counts: np.ndarray  # rows: predicted clusters (noise last if present), cols: classes
    row_ids: tuple[int, ...]
    col_ids: tuple[int, ...]

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def noise_row(self) -> int | None:
        return self.row_ids.index(NOISE) if NOISE in self.row_ids else None


@dataclass(frozen=True)
class MetricReport:
    accuracy: float
    purity: float
    nmi: float
    n_predicted_clusters: int
    noise_fraction: float

    def as_dict(self) -> dict:
        return asdict(self)


def _as_labels(v, what: str) -> np.ndarray:
    a = np.asarray(v)
    if a.ndim != 1:
        raise DataError(f"{what} must be 1-D")
    return a.astype(np.int64)


def confusion(pred, truth) -> ConfusionMatrix:
    pred = _as_labels(pred, "predicted labels")
    truth = _as_labels(truth, "ground truth")
    if pred.shape != truth.shape:
        raise DataError(f"length mismatch: {pred.size} predicted vs {truth.size} ground-truth labels")
    if pred.size == 0:
        raise DataError("empty label vectors")
    if np.any(truth == NOISE):
        raise DataError("ground truth contains the noise label -1")
    rows = sorted(set(np.unique(pred).tolist()) - {NOISE})
    if np.any(pred == NOISE):
        rows.append(NOISE)
    cols = np.unique(truth).tolist()
    r = np.searchsorted(np.array(rows[:-1] if rows[-1] == NOISE else rows), pred)
    r[pred == NOISE] = len(rows) - 1
    c = np.searchsorted(np.array(cols), truth)
    counts = np.zeros((len(rows), len(cols)), dtype=np.int64)
    np.add.at(counts, (r, c), 1)
    return ConfusionMatrix(counts, tuple(rows), tuple(cols))


def _cluster_block(cm: ConfusionMatrix) -> np.ndarray:
    nr = cm.noise_row
    return cm.counts if nr is None else np.delete(cm.counts, nr, axis=0)


def matched_count(pred, truth) -> int:
    """Largest number of points correct under a one-to-one cluster-to-class mapping."""
    block = _cluster_block(confusion(pred, truth))
    if block.size == 0:
        return 0
    r, c = linear_sum_assignment(block, maximize=True)
    return int(block[r, c].sum())


def accuracy(pred, truth) -> float:
    pred = _as_labels(pred, "predicted labels")
    return matched_count(pred, truth) / pred.size


def brute_force_matched_count(pred, truth) -> int:
    """Matched count by enumerating every relabelling of the predicted clusters."""
    pred = _as_labels(pred, "predicted labels")
    truth = _as_labels(truth, "ground truth")
    if pred.shape != truth.shape:
        raise DataError(f"length mismatch: {pred.size} predicted vs {truth.size} ground-truth labels")
    clusters = sorted(set(pred.tolist()) - {NOISE})
    if len(clusters) > MAX_BRUTE_FORCE_CLUSTERS:
        raise DataError(f"{len(clusters)} clusters is too many for permutation enumeration")
    classes = sorted(set(truth.tolist()))
    # placeholder -2 matches no class, so surplus clusters still get an image
    targets = classes + [-2] * max(0, len(clusters) - len(classes))
    slot = np.full(pred.shape, len(clusters), dtype=np.int64)
    for s, c in enumerate(clusters):
        slot[pred == c] = s
    best = 0
    for perm in itertools.permutations(targets, len(clusters)):
        lut = np.array(list(perm) + [-3], dtype=np.int64)  # -3: noise, never correct
        best = max(best, int(np.count_nonzero(lut[slot] == truth)))
    return best


def brute_force_accuracy(pred, truth) -> float:
    pred = _as_labels(pred, "predicted labels")
    return brute_force_matched_count(pred, truth) / pred.size


def purity(pred, truth) -> float:
    cm = confusion(pred, truth)
    return float(cm.counts.max(axis=1).sum()) / cm.total


def _entropy(counts: np.ndarray, total: int) -> float:
    p = counts[counts > 0] / total
    return float(-(p * np.log(p)).sum())


def mutual_information(cm: ConfusionMatrix) -> float:
    n = cm.total
    joint = cm.counts
    pr = joint.sum(axis=1)
    pc = joint.sum(axis=0)
    i, j = np.nonzero(joint)
    nij = joint[i, j].astype(float)
    return float((nij / n * np.log(nij * n / (pr[i].astype(float) * pc[j]))).sum())


def nmi(pred, truth) -> float:
    """2 I(L;G) / (H(L) + H(G)) in nats; 1.0 when both labellings are constant."""
    cm = confusion(pred, truth)
    n = cm.total
    h = _entropy(cm.counts.sum(axis=1), n) + _entropy(cm.counts.sum(axis=0), n)
    if h == 0.0:
        return 1.0
    nz = cm.counts > 0
    if np.all(nz.sum(axis=0) == 1) and np.all(nz.sum(axis=1) == 1):
        return 1.0  # identical partitions; avoids 1 - ulp from rounding
    return float(min(1.0, max(0.0, 2.0 * mutual_information(cm) / h)))


def evaluate(pred, truth) -> MetricReport:
    pred = _as_labels(pred, "predicted labels")
    return MetricReport(
        accuracy=accuracy(pred, truth),
        purity=purity(pred, truth),
        nmi=nmi(pred, truth),
        n_predicted_clusters=int(np.unique(pred[pred != NOISE]).size),
        noise_fraction=float(np.mean(pred == NOISE)),
    )


def summarize(values) -> tuple[float, float]:
    """Mean and population standard deviation of a list of scores."""
    v = list(values)
    mu = math.fsum(v) / len(v)
    return mu, math.sqrt(math.fsum((x - mu) ** 2 for x in v) / len(v))
