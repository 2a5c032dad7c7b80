"""Datasets: an N x n observation matrix with optional ground-truth labels.

CSV in/out, super-class regrouping and column standardization live here.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import DataError


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Dataset:
    """Observation matrix ``points`` (N x n) plus optional integer labels.

    ``label_names[i]`` is the original text of encoded label ``i``.
    ``aux_labels`` holds additional label granularities (e.g. ``"sublabel"``).
    """

    points: np.ndarray
    labels: np.ndarray | None = None
    name: str = "data"
    columns: tuple[str, ...] = ()
    label_names: tuple[str, ...] | None = None
    aux_labels: Mapping[str, np.ndarray] = field(default_factory=dict)
    meta: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2:
            raise DataError(f"points must be 2-D, got shape {pts.shape}")
        if pts.shape[0] < 1 or pts.shape[1] < 1:
            raise DataError(f"need N >= 1 and n >= 1, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            row, col = np.argwhere(~np.isfinite(pts))[0]
            raise DataError(f"non-finite value at row {row}, column {col}")
        object.__setattr__(self, "points", _frozen(pts))
        if self.labels is not None:
            object.__setattr__(self, "labels", _frozen(_check_labels(self.labels, len(pts), "labels")))
        aux = {k: _frozen(_check_labels(v, len(pts), k)) for k, v in self.aux_labels.items()}
        object.__setattr__(self, "aux_labels", aux)
        if not self.columns:
            object.__setattr__(self, "columns", tuple(f"x{j + 1}" for j in range(pts.shape[1])))
        elif len(self.columns) != pts.shape[1]:
            raise DataError(f"{len(self.columns)} column names for {pts.shape[1]} columns")
        object.__setattr__(self, "meta", dict(self.meta))

    @property
    def N(self) -> int:
        return self.points.shape[0]

    @property
    def n(self) -> int:
        return self.points.shape[1]

    @property
    def n_classes(self) -> int:
        return 0 if self.labels is None else int(np.unique(self.labels).size)

    def with_points(self, points, **changes) -> "Dataset":
        return replace(self, points=points, **changes)

    def with_labels(self, labels, **changes) -> "Dataset":
        return replace(self, labels=labels, **changes)


def _check_labels(labels, n_rows: int, what: str) -> np.ndarray:
    lab = np.asarray(labels)
    if lab.ndim != 1 or lab.shape[0] != n_rows:
        raise DataError(f"{what} has shape {lab.shape}, expected ({n_rows},)")
    if lab.size and not np.issubdtype(lab.dtype, np.integer):
        if not np.all(np.equal(np.mod(lab, 1), 0)):
            raise DataError(f"{what} must be integers")
    lab = lab.astype(np.int64)
    if lab.size and lab.min() < 0:
        raise DataError(f"{what} must be non-negative")
    return lab


def encode_labels(values: Sequence[str]) -> tuple[np.ndarray, tuple[str, ...]]:
    """Map arbitrary label values to 0-based ints in order of first occurrence."""
    codes: dict[str, int] = {}
    out = np.empty(len(values), dtype=np.int64)
    for i, v in enumerate(values):
        out[i] = codes.setdefault(v, len(codes))
    return out, tuple(codes)


def load_csv(
    path,
    label_column: str | None = None,
    aux_label_columns: Sequence[str] = (),
    name: str | None = None,
) -> Dataset:
    """Read a headered, comma-separated file of decimal numbers.

    Every column except ``label_column`` and ``aux_label_columns`` must be
    numeric. Errors name the offending 1-based line and column.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"{path}: no such file")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise DataError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    body = rows[1:]
    if not body:
        raise DataError(f"{path}: header only, no data rows")

    label_cols = [c for c in (label_column, *aux_label_columns) if c is not None]
    for c in label_cols:
        if c not in header:
            raise DataError(f"{path}: label column {c!r} not in header {header}")
    label_idx = {c: header.index(c) for c in label_cols}
    skip = set(label_idx.values())
    feat_idx = [j for j in range(len(header)) if j not in skip]
    if not feat_idx:
        raise DataError(f"{path}: no numeric columns")

    pts = np.empty((len(body), len(feat_idx)))
    raw_labels = {c: [] for c in label_cols}
    for r, row in enumerate(body):
        line = r + 2
        if len(row) != len(header):
            raise DataError(f"{path}: line {line} has {len(row)} fields, header has {len(header)}")
        for out_j, j in enumerate(feat_idx):
            cell = row[j].strip()
            try:
                v = float(cell)
            except ValueError:
                raise DataError(
                    f"{path}: line {line}, column {j + 1} ({header[j]!r}): non-numeric value {cell!r}"
                ) from None
            if not math.isfinite(v):
                raise DataError(f"{path}: line {line}, column {j + 1} ({header[j]!r}): non-finite value {cell!r}")
            pts[r, out_j] = v
        for c, j in label_idx.items():
            raw_labels[c].append(row[j].strip())

    labels = label_names = None
    if label_column is not None:
        labels, label_names = encode_labels(raw_labels[label_column])
    aux = {c: encode_labels(raw_labels[c])[0] for c in aux_label_columns}
    return Dataset(
        points=pts,
        labels=labels,
        name=name or path.stem,
        columns=tuple(header[j] for j in feat_idx),
        label_names=label_names,
        aux_labels=aux,
        meta={"source": str(path)},
    )


def save_csv(data: Dataset, path, label_column: str = "label") -> None:
    """Write points with 17 significant digits so ``load_csv`` round-trips exactly."""
    header = list(data.columns)
    cols = [data.points[:, j] for j in range(data.n)]
    if data.labels is not None:
        header.append(label_column)
    header.extend(data.aux_labels)
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for i in range(data.N):
            row = [format(c[i], ".17g") for c in cols]
            if data.labels is not None:
                lab = int(data.labels[i])
                row.append(data.label_names[lab] if data.label_names else str(lab))
            row.extend(str(int(v[i])) for v in data.aux_labels.values())
            w.writerow(row)


@dataclass(frozen=True)
class ClassMap:
    """Sub-class id -> super-class id, with optional super-class names."""

    mapping: Mapping[int, int]
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        images = sorted(set(self.mapping.values()))
        if images != list(range(len(images))):
            raise DataError(f"super-class ids must be contiguous from 0, got {images}")
        if self.names is not None and len(self.names) != len(images):
            raise DataError(f"{len(self.names)} names for {len(images)} super-classes")

    @classmethod
    def from_names(cls, label_names: Sequence[str], groups: Mapping[str, str]) -> "ClassMap":
        """Build from original class names; ``groups`` maps sub-class name to super-class name.

        Super-class ids follow first appearance along ``label_names``.
        """
        super_ids: dict[str, int] = {}
        mapping = {}
        for i, sub in enumerate(label_names):
            if sub not in groups:
                raise DataError(f"class {sub!r} has no super-class")
            mapping[i] = super_ids.setdefault(groups[sub], len(super_ids))
        return cls(mapping, tuple(super_ids))


def regroup(labels, class_map: ClassMap) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    missing = sorted(set(np.unique(labels).tolist()) - set(class_map.mapping))
    if missing:
        raise DataError(f"labels {missing} have no super-class in the class map")
    lut = np.full(max(class_map.mapping) + 1, -1, dtype=np.int64)
    for sub, sup in class_map.mapping.items():
        lut[sub] = sup
    return lut[labels]


def regroup_dataset(data: Dataset, class_map: ClassMap) -> Dataset:
    """Replace labels by super-class labels, keeping the originals as ``aux_labels['sublabel']``."""
    if data.labels is None:
        raise DataError(f"{data.name}: no labels to regroup")
    aux = dict(data.aux_labels)
    aux["sublabel"] = data.labels
    return replace(
        data,
        labels=regroup(data.labels, class_map),
        label_names=class_map.names,
        aux_labels=aux,
        name=data.name + "*",
    )


def standardize(data: Dataset) -> Dataset:
    """Zero-mean, unit-variance columns (population variance). Constant columns become 0."""
    x = data.points
    mu = x.mean(axis=0)
    sd = x.std(axis=0)
    centered = x - mu
    # relative threshold: a column that is constant up to rounding is treated as constant
    const = sd <= 1e-12 * np.maximum(np.abs(mu), 1.0)
    out = np.divide(centered, sd, out=np.zeros_like(centered), where=~const)
    return data.with_points(out)


# Super-class groupings of the two human-activity datasets.
HAD_GROUPS = {
    "sitting": "sitting",
    "standing": "standing",
    "walking": "normal",
    "running": "dynamic",
    "dancing": "dynamic",
}
HAR_GROUPS = {
    "LAYING": "lying",
    "SITTING": "sitting_or_standing",
    "STANDING": "sitting_or_standing",
    "WALKING": "walking",
    "WALKING_UPSTAIRS": "walking",
    "WALKING_DOWNSTAIRS": "walking",
}
# UCI HAR ships activity ids 1..6 (activity_labels.txt)
HAR_GROUPS.update(
    {"1": "walking", "2": "walking", "3": "walking", "4": "sitting_or_standing", "5": "sitting_or_standing", "6": "lying"}
)
