"""Command-line entry point: ``sdrclust <subcommand> ...``.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import bench, clustering, dataset, metrics, pipeline, projection, sharpening, synth
from .errors import ConfigError, DataError, SDRError
from .plot import plot_scatter

log = logging.getLogger("sdrclust")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="global random seed (default 0)")
    p.add_argument("--out-dir", default=argparse.SUPPRESS, help="directory for outputs")
    p.add_argument("--config", default=argparse.SUPPRESS, help="INI pipeline config")
    p.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS)
    return p


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _auto_int(text: str):
    return None if text.lower() == "auto" else int(text)


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="sdrclust", parents=[common], description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", parents=[common], help="generate a synthetic T1-T5 dataset")
    p.add_argument("--family", choices=synth.FAMILIES, default="T1")
    p.add_argument("--n", type=int, default=5000, help="number of points N")
    p.add_argument("--dims", type=int, default=20)
    p.add_argument("--clusters", type=int, default=5)
    p.add_argument("--snr", type=float, default=10.0, help="T5 signal/noise variance ratio (linear)")
    p.add_argument("--out", required=True)

    p = sub.add_parser("sharpen", parents=[common], help="move points toward their kNN centroids")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--label-col")
    p.add_argument("--k", type=_auto_int, default=None, help="neighbours (default round(sqrt(N)))")
    p.add_argument("--alpha", type=float, default=0.3, help="step size in (0, 1]")
    p.add_argument("--iters", type=int, default=10)

    p = sub.add_parser("project", parents=[common], help="project to low dimension")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--label-col")
    p.add_argument("--method", choices=("lmds", "cmds", "pca"), default="lmds")
    p.add_argument("--landmarks", type=_auto_int, default=None)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--pca-variance", type=float, help="PCA-reduce to this variance share before projecting")

    p = sub.add_parser(
        "cluster",
        parents=[common],
        help="label points",
        description="DBSCAN compares squared distances with eps**2; eps itself is a plain Euclidean radius.",
    )
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--method", choices=clustering.METHODS, required=True)
    p.add_argument("--label-col", help="ground-truth column: excluded from features; its class count is the default k")
    p.add_argument("--columns", help="comma-separated feature columns (default: p1,p2,... if present, else all)")
    p.add_argument("--k", type=int)
    p.add_argument("--replicates", type=int, default=10)
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--auto-params", action="store_true", help="DBSCAN: eps from the k-distance knee, min_pts=round(ln N)")
    p.add_argument("--eps", type=float)
    p.add_argument("--min-pts", type=int)
    p.add_argument("--knn", type=int, help="spectral: neighbours in the similarity graph")

    p = sub.add_parser("evaluate", parents=[common], help="score labels against ground truth")
    p.add_argument("--pred", required=True, help="labels CSV with a 'cluster' column")
    p.add_argument("--truth", required=True)
    p.add_argument("--label-col", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--method", default=None, help="provenance: clustering method")
    p.add_argument("--params", default=None, help="provenance: JSON object of clustering parameters")

    p = sub.add_parser("pipeline", parents=[common], help="full LMDS/SLMDS x clustering experiment grid")
    p.add_argument("--in", dest="inp", help="input CSV (instead of a config dataset)")
    p.add_argument("--name")
    p.add_argument("--label-col")
    p.add_argument("--synth", choices=synth.FAMILIES, help="use a synthetic dataset instead of a file")
    p.add_argument("--n", type=int, default=5000)
    p.add_argument("--dims", type=int, default=20)
    p.add_argument("--clusters", type=int, default=5)
    p.add_argument("--truth", default=None, help="label column to score against (e.g. sublabel)")
    p.add_argument("--regroup", choices=sorted(pipeline.REGROUPINGS))
    p.add_argument("--pca-variance", type=float)
    p.add_argument("--methods", help="comma-separated subset of " + ",".join(clustering.METHODS))
    p.add_argument("--conditions", help="comma-separated subset of lmds,slmds")
    p.add_argument("--runs", type=int, help="repeat with seeds seed..seed+runs-1 and report mean/std")
    p.add_argument("--k", type=int)
    p.add_argument("--landmarks", type=_auto_int)
    p.add_argument("--sharpen-k", type=_auto_int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--iters", type=int)
    p.add_argument("--standardize", action="store_true", default=None)
    p.add_argument("--no-plots", action="store_true")

    p = sub.add_parser("bench", parents=[common], help="time the clustering methods against N")
    p.add_argument("--sizes", type=_int_list, default=[1024, 4096, 16384])
    p.add_argument("--dims", type=int, default=2)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--out", required=True)

    p = sub.add_parser("plot", parents=[common], help="SVG scatter of a 2-D projection")
    p.add_argument("--in", dest="inp", required=True, help="projection CSV with p1,p2 columns")
    p.add_argument("--labels", required=True, help="labels CSV with a 'cluster' column")
    p.add_argument("--out", required=True)
    p.add_argument("--title", default="")
    return parser


def _out(args, path: str) -> Path:
    p = Path(path)
    out_dir = getattr(args, "out_dir", None)
    if out_dir and not p.is_absolute():
        p = Path(out_dir) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def read_labels(path) -> np.ndarray:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"{path}: no such file")
    lines = path.read_text(encoding="utf-8").split()
    if not lines or lines[0].strip() != "cluster":
        raise DataError(f"{path}: expected a header line 'cluster'")
    try:
        return np.array([int(v) for v in lines[1:]], dtype=np.int64)
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from None


AUX_LABEL_COLUMNS = ("sublabel",)


def _load(path, label_col=None, guess_label: bool = False) -> dataset.Dataset:
    """load_csv that also keeps known auxiliary label columns (e.g. T4's ``sublabel``) out of the features."""
    path = Path(path)
    header = []
    if path.is_file():
        with path.open(encoding="utf-8") as fh:
            header = [h.strip() for h in fh.readline().split(",")]
    if guess_label and label_col is None and "label" in header:
        label_col = "label"
    aux = tuple(c for c in AUX_LABEL_COLUMNS if c in header and c != label_col)
    return dataset.load_csv(path, label_col, aux_label_columns=aux)


def _select_columns(data: dataset.Dataset, columns: str | None) -> np.ndarray:
    if columns:
        wanted = [c.strip() for c in columns.split(",")]
    else:
        wanted = [c for c in data.columns if c.startswith("p") and c[1:].isdigit()] or list(data.columns)
    missing = [c for c in wanted if c not in data.columns]
    if missing:
        raise DataError(f"columns {missing} not in {list(data.columns)}")
    return data.points[:, [data.columns.index(c) for c in wanted]]


def cmd_synth(args) -> None:
    spec = synth.SynthSpec(args.family, args.n, args.dims, args.clusters, getattr(args, "seed", 0), args.snr)
    data = synth.generate(spec)
    dataset.save_csv(data, _out(args, args.out))


def cmd_sharpen(args) -> None:
    data = _load(args.inp, args.label_col)
    params = sharpening.SharpenParams(args.k, args.alpha, args.iters, getattr(args, "seed", 0))
    dataset.save_csv(sharpening.sharpen(data, params), _out(args, args.out), args.label_col or "label")


def cmd_project(args) -> None:
    data = _load(args.inp, args.label_col)
    if args.pca_variance is not None:
        data, _ = projection.pca_reduce(data, args.pca_variance)
    proj = projection.project(data, args.method, args.dim, args.landmarks, getattr(args, "seed", 0))
    names = tuple(f"p{j + 1}" for j in range(proj.dim))
    merged = data.with_points(np.hstack([data.points, proj.coords]), columns=data.columns + names)
    dataset.save_csv(merged, _out(args, args.out), args.label_col or "label")


def cmd_cluster(args) -> None:
    data = _load(args.inp, args.label_col)
    x = _select_columns(data, args.columns)
    k = args.k if args.k is not None else (data.n_classes or None)
    eps, min_pts = args.eps, args.min_pts
    if args.method == "dbscan" and not args.auto_params and (eps is None or min_pts is None):
        raise ConfigError("dbscan needs --eps and --min-pts, or --auto-params")
    res = clustering.cluster(
        x, args.method, k=k, seed=getattr(args, "seed", 0), replicates=args.replicates,
        max_iter=args.max_iter, eps=eps, min_pts=min_pts, knn=args.knn,
    )  # fmt: skip
    pipeline._write_labels(_out(args, args.out), res.labels)
    log.info("%s: %d clusters %s", args.method, res.n_clusters, json.dumps(res.params, sort_keys=True))


def cmd_evaluate(args) -> None:
    pred = read_labels(args.pred)
    truth = _load(args.truth, args.label_col)
    rep = metrics.evaluate(pred, truth.labels)
    try:
        params = json.loads(args.params) if args.params else None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"--params is not valid JSON: {exc}") from None
    out = {
        "metrics": rep.as_dict(),
        "provenance": {
            "pred": str(args.pred),
            "truth": str(args.truth),
            "label_col": args.label_col,
            "method": args.method,
            "params": params,
            "seed": getattr(args, "seed", None),
        },
        "noise_policy": pipeline.NOISE_POLICY,
    }
    pipeline._dump_json(_out(args, args.out), out)
    print(json.dumps(rep.as_dict(), sort_keys=True))


def _split(text):
    return tuple(v.strip() for v in text.split(",") if v.strip())


def pipeline_config(args) -> pipeline.PipelineConfig:
    cfg_path = getattr(args, "config", None)
    if cfg_path:
        cfg = pipeline.load_config(cfg_path)
    else:
        cfg = pipeline.PipelineConfig(datasets=[])
    if args.inp or args.synth:
        if args.synth:
            spec = synth.SynthSpec(args.synth, args.n, args.dims, args.clusters, getattr(args, "seed", 1))
            src = pipeline.DatasetSource(name=args.name or args.synth, synth=spec)
        else:
            src = pipeline.DatasetSource(name=args.name or Path(args.inp).stem, path=args.inp, label_col=args.label_col)
        src.regroup = args.regroup
        src.pca_variance = args.pca_variance
        if args.truth:
            src.truth = args.truth
        cfg.datasets = [src]
    if args.methods:
        cfg.methods = _split(args.methods)
    if args.conditions:
        cfg.conditions = _split(args.conditions)
    if args.runs is not None:
        cfg.runs = args.runs
    if args.k is not None:
        cfg.k = args.k
    if args.landmarks is not None:
        cfg.n_landmarks = args.landmarks
    shp = {}
    if args.sharpen_k is not None:
        shp["k_neighbors"] = args.sharpen_k
    if args.alpha is not None:
        shp["step_size"] = args.alpha
    if args.iters is not None:
        shp["iterations"] = args.iters
    if shp:
        cfg.sharpen = replace(cfg.sharpen, **shp)
    if args.standardize:
        cfg.standardize = True
    if args.no_plots:
        cfg.plots = False
    if hasattr(args, "seed"):
        cfg.seed = args.seed
    if hasattr(args, "out_dir"):
        cfg.out_dir = args.out_dir
    return cfg


def cmd_pipeline(args) -> None:
    cfg = pipeline_config(args)
    result = pipeline.run_pipeline(cfg)
    for row in pipeline.summary_rows(result, cfg):
        if row[3] == "accuracy":
            print(f"{row[0]:>12s} {row[1]:>6s} {row[2]:>12s} accuracy {row[4]:.4f} +/- {row[5]:.4f}")
    print(f"run directory: {result.run_dir}")


def cmd_bench(args) -> None:
    rows = bench.run_scaling(args.sizes, args.dims, args.repeats, getattr(args, "seed", 0))
    bench.write_timings(rows, _out(args, args.out))
    for r in rows:
        print(f"{r.method:>12s} N={r.N:<7d} {r.median_seconds:.4f}s")


def cmd_plot(args) -> None:
    data = _load(args.inp, guess_label=True)
    coords = _select_columns(data, None)
    plot_scatter(coords, read_labels(args.labels), _out(args, args.out), args.title)


COMMANDS = {
    "synth": cmd_synth,
    "sharpen": cmd_sharpen,
    "project": cmd_project,
    "cluster": cmd_cluster,
    "evaluate": cmd_evaluate,
    "pipeline": cmd_pipeline,
    "bench": cmd_bench,
    "plot": cmd_plot,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(getattr(args, "verbose", 0) or 0, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        COMMANDS[args.command](args)
    except SDRError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
