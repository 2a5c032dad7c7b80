"""Convert raw UCI downloads into the CSV layout the package reads.

    python scripts/prepare_uci.py wifi  path/to/wifi_localization.txt   data/wifi.csv
    python scripts/prepare_uci.py har   "path/to/UCI HAR Dataset"        data/har.csv [--split train|test|all]
    python scripts/prepare_uci.py banknote path/to/data_banknote_authentication.txt data/banknote.csv

Outputs: wifi.csv (label column ``room``), har.csv (label column ``activity``,
values 1-6 as in the UCI release), banknote.csv (label column ``class``).
"""

from __future__ import annotations

import argparse
import csv
from pathlib import Path

import numpy as np


def write(path: Path, header: list[str], x: np.ndarray, labels) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row, lab in zip(x, labels):
            w.writerow([format(v, ".17g") for v in row] + [str(lab)])
    print(f"wrote {path}: {x.shape[0]} rows, {x.shape[1]} features")


def wifi(src: Path, out: Path, _split: str) -> None:
    raw = np.loadtxt(src)
    x, room = raw[:, :-1], raw[:, -1].astype(int)
    write(out, [f"wap{j + 1}" for j in range(x.shape[1])] + ["room"], x, room)


def har(src: Path, out: Path, split: str) -> None:
    parts = ("train", "test") if split == "all" else (split,)
    xs, ys = [], []
    for p in parts:
        xs.append(np.loadtxt(src / p / f"X_{p}.txt"))
        ys.append(np.loadtxt(src / p / f"y_{p}.txt", dtype=int))
    x, y = np.vstack(xs), np.concatenate(ys)
    write(out, [f"f{j + 1}" for j in range(x.shape[1])] + ["activity"], x, y)


def banknote(src: Path, out: Path, _split: str) -> None:
    raw = np.loadtxt(src, delimiter=",")
    write(out, ["variance", "skewness", "curtosis", "entropy", "class"], raw[:, :-1], raw[:, -1].astype(int))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("dataset", choices=("wifi", "har", "banknote"))
    ap.add_argument("src", type=Path)
    ap.add_argument("out", type=Path)
    ap.add_argument("--split", choices=("train", "test", "all"), default="all", help="HAR only")
    args = ap.parse_args()
    {"wifi": wifi, "har": har, "banknote": banknote}[args.dataset](args.src, args.out, args.split)


if __name__ == "__main__":
    main()
