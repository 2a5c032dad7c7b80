"""Deterministic SVG scatter plots of 2-D projections coloured by cluster label."""

from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .errors import DataError

PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78", "#98df8a",
)  # fmt: skip
NOISE_COLOR = "#999999"

WIDTH = HEIGHT = 480
PAD = 24
MARGIN = 0.05
RADIUS = 1.8


def label_color(label: int) -> str:
    return NOISE_COLOR if label < 0 else PALETTE[label % len(PALETTE)]


def _axis(v: np.ndarray):
    lo, hi = float(v.min()), float(v.max())
    span = hi - lo
    if span == 0.0:
        span = max(abs(lo), 1.0)
        lo -= span / 2
        hi += span / 2
    return lo - MARGIN * span, hi + MARGIN * span


def render_svg(coords, labels, title: str = "") -> str:
    xy = np.asarray(coords, dtype=float)
    labels = np.asarray(labels, dtype=np.int64)
    if xy.ndim != 2 or xy.shape[1] != 2:
        raise DataError(f"scatter plot needs 2-D coordinates, got shape {xy.shape}")
    if labels.shape != (xy.shape[0],):
        raise DataError(f"{labels.size} labels for {xy.shape[0]} points")
    (x0, x1), (y0, y1) = _axis(xy[:, 0]), _axis(xy[:, 1])
    inner_w, inner_h = WIDTH - 2 * PAD, HEIGHT - 2 * PAD
    px = PAD + (xy[:, 0] - x0) / (x1 - x0) * inner_w
    py = HEIGHT - PAD - (xy[:, 1] - y0) / (y1 - y0) * inner_h  # y grows downward in SVG

    lines = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f"<title>{escape(title)}</title>",
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        f'<rect x="{PAD}" y="{PAD}" width="{inner_w}" height="{inner_h}" fill="none" stroke="#cccccc"/>',
        '<g stroke="none">',
    ]
    # noise first so clustered points draw on top
    order = np.concatenate([np.flatnonzero(labels < 0), np.flatnonzero(labels >= 0)])
    for i in order:
        lines.append(f'<circle cx="{px[i]:.2f}" cy="{py[i]:.2f}" r="{RADIUS}" fill="{label_color(labels[i])}"/>')
    lines += ["</g>", "</svg>", ""]
    return "\n".join(lines)


def plot_scatter(coords, labels, out, title: str = "") -> Path:
    out = Path(out)
    out.write_text(render_svg(getattr(coords, "coords", coords), labels, title), encoding="utf-8")
    return out
