"""Clustering-time scaling in 2-D, with log-log slopes.

    python scripts/run_bench.py --sizes 1024,4096,16384 --repeats 5 --out runs/bench.csv
"""

from __future__ import annotations

import argparse
from pathlib import Path

from sdrclust.bench import loglog_slope, run_scaling, write_timings
from sdrclust.clustering import METHODS


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="1024,4096,16384")
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=Path, default=Path("runs/bench.csv"))
    args = ap.parse_args()

    rows = run_scaling([int(s) for s in args.sizes.split(",")], dims=2, repeats=args.repeats, seed=args.seed)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    write_timings(rows, args.out)
    for r in rows:
        print(f"{r.method:>12s} N={r.N:<7d} median {r.median_seconds:.4f}s")
    for m in METHODS:
        print(f"{m:>12s} log-log slope {loglog_slope(rows, m):.2f}")


if __name__ == "__main__":
    main()
