"""LMDS/SLMDS x five-method grid on the real datasets found in a data directory.

    python scripts/run_real.py --data data --runs 10 --out-dir runs/real

Looked-up files (missing ones are skipped):
  wifi.csv      label ``room``
  har.csv       label ``activity`` -> three super-classes, PCA to 80% variance
  had.csv       label ``activity`` -> four super-classes
  banknote.csv  label ``class``
"""

from __future__ import annotations

import argparse
from pathlib import Path

from sdrclust.pipeline import DatasetSource, PipelineConfig, run_pipeline, summary_rows

KNOWN = {
    "wifi": dict(file="wifi.csv", label_col="room"),
    "har_star": dict(file="har.csv", label_col="activity", regroup="har", pca_variance=0.8),
    "had_star": dict(file="had.csv", label_col="activity", regroup="had"),
    "banknote": dict(file="banknote.csv", label_col="class"),
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--data", type=Path, default=Path("data"))
    ap.add_argument("--runs", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out-dir", default="runs/real")
    ap.add_argument("--no-plots", action="store_true")
    args = ap.parse_args()

    sources = []
    for name, spec in KNOWN.items():
        spec = dict(spec)
        path = args.data / spec.pop("file")
        if path.is_file():
            sources.append(DatasetSource(name, path=str(path), **spec))
        else:
            print(f"skipping {name}: {path} not found")
    if not sources:
        raise SystemExit("no datasets found; see scripts/prepare_uci.py")
    cfg = PipelineConfig(
        datasets=sources, runs=args.runs, seed=args.seed, out_dir=args.out_dir, plots=not args.no_plots
    )
    result = run_pipeline(cfg)
    for name, info in result.dataset_info.items():
        print(f"{name}: {info}")
    for name, cond, method, metric, mu, sd, runs in summary_rows(result, cfg):
        if metric == "accuracy":
            print(f"{name:>9s} {cond.upper():>6s} {method:>12s} acc {mu:.4f} +/- {sd:.4f} ({runs} runs)")
    print(f"tables in {result.run_dir}")


if __name__ == "__main__":
    main()
