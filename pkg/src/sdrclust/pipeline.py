"""End-to-end runs: load -> [sharpen] -> project -> cluster -> evaluate -> plot.

The ``lmds`` condition projects the data as loaded; ``slmds`` sharpens it
first. Both conditions share seeds and projection parameters so their
scores are directly comparable.
"""

from __future__ import annotations

import configparser
import csv
import json
import logging
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import clustering, dataset, metrics, projection, sharpening, synth
from .errors import ConfigError, DataError, NumericError, SDRError
from .plot import plot_scatter

log = logging.getLogger(__name__)

CONDITIONS = ("lmds", "slmds")
METRICS = ("accuracy", "purity", "nmi")
REGROUPINGS = {"had": dataset.HAD_GROUPS, "har": dataset.HAR_GROUPS}
NOISE_POLICY = "dbscan noise: never matched under accuracy; own majority row under purity; own cluster under nmi"


@dataclass
class DatasetSource:
    """Where one dataset comes from and how it is prepared before the conditions run."""

    name: str
    path: str | None = None
    label_col: str | None = None
    aux_label_cols: tuple[str, ...] = ()
    synth: synth.SynthSpec | None = None
    resample: bool = False  # synthetic only: draw a fresh dataset per run (seed = run seed)
    regroup: str | None = None  # "had" or "har"
    pca_variance: float | None = None
    truth: str = "label"  # or an aux label column, e.g. "sublabel"

    def validate(self) -> None:
        if (self.path is None) == (self.synth is None):
            raise ConfigError(f"dataset {self.name!r}: give exactly one of path or synth")
        if self.path is not None and not Path(self.path).is_file():
            raise ConfigError(f"dataset {self.name!r}: file {self.path} does not exist")
        if self.regroup is not None and self.regroup not in REGROUPINGS:
            raise ConfigError(f"dataset {self.name!r}: regroup must be one of {sorted(REGROUPINGS)}")
        if self.pca_variance is not None and not 0 < self.pca_variance <= 1:
            raise ConfigError(f"dataset {self.name!r}: pca_variance must be in (0, 1]")


@dataclass
class PipelineConfig:
    datasets: list[DatasetSource]
    conditions: tuple[str, ...] = CONDITIONS
    methods: tuple[str, ...] = clustering.METHODS
    sharpen: sharpening.SharpenParams = field(default_factory=sharpening.SharpenParams)
    projection: str = "lmds"
    dim: int = 2
    n_landmarks: int | None = None
    k: int | None = None  # None: number of ground-truth classes
    replicates: int = 10
    max_iter: int = 100
    dbscan_eps: float | None = None
    dbscan_min_pts: int | None = None
    spectral_knn: int | None = None
    standardize: bool = False
    runs: int = 1
    seed: int = 0
    out_dir: str = "runs/latest"
    plots: bool = True

    def validate(self) -> None:
        if not self.datasets:
            raise ConfigError("no datasets configured")
        if not self.methods:
            raise ConfigError("at least one clustering method is required")
        bad = [m for m in self.methods if m not in clustering.METHODS]
        if bad:
            raise ConfigError(f"unknown clustering methods {bad}; choose from {clustering.METHODS}")
        bad = [c for c in self.conditions if c not in CONDITIONS]
        if bad or not self.conditions:
            raise ConfigError(f"conditions must be a non-empty subset of {CONDITIONS}, got {self.conditions}")
        if self.runs < 1:
            raise ConfigError("runs must be >= 1")
        if self.seed is None:
            raise ConfigError("a seed is required")
        names = [d.name for d in self.datasets]
        if len(set(names)) != len(names):
            raise ConfigError(f"duplicate dataset names in {names}")
        for d in self.datasets:
            d.validate()

    def manifest(self) -> dict:
        out = asdict(self)
        out["noise_policy"] = NOISE_POLICY
        return out


@dataclass
class Cell:
    dataset: str
    condition: str
    method: str
    run: int
    seed: int
    report: metrics.MetricReport


@dataclass
class PipelineResult:
    run_dir: Path
    cells: list[Cell]
    dataset_info: dict

    def scores(self, dataset_name: str, condition: str, method: str, metric: str = "accuracy") -> list[float]:
        return [
            getattr(c.report, metric)
            for c in self.cells
            if (c.dataset, c.condition, c.method) == (dataset_name, condition, method)
        ]


# ---------------------------------------------------------------- config I/O

_AUTO = ("", "auto", "none")


def _opt(value: str, cast):
    return None if value.strip().lower() in _AUTO else cast(value.strip())


def _list(value: str) -> tuple[str, ...]:
    return tuple(v.strip() for v in value.replace(";", ",").split(",") if v.strip())


def _bool(value: str) -> bool:
    v = value.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {value!r}")


def _dataset_from_section(name: str, sec) -> DatasetSource:
    spec = None
    if "synth" in sec:
        spec = synth.SynthSpec(
            family=sec["synth"].strip(),
            N=int(sec.get("n", 5000)),
            n=int(sec.get("dims", 20)),
            n_clusters=int(sec.get("clusters", 5)),
            seed=int(sec.get("seed", 1)),
            snr=float(sec.get("snr", 10.0)),
        )
    return DatasetSource(
        name=name,
        path=sec.get("path"),
        label_col=sec.get("label_col"),
        aux_label_cols=_list(sec.get("aux_label_cols", "")),
        synth=spec,
        resample=_bool(sec.get("resample", "false")),
        regroup=_opt(sec.get("regroup", ""), str),
        pca_variance=_opt(sec.get("pca_variance", ""), float),
        truth=sec.get("truth", "label"),
    )


def load_config(path) -> PipelineConfig:
    """Read an INI file with [pipeline], [sharpen], [projection], [clustering] and [dataset:NAME] sections."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file {path} does not exist")
    cp = configparser.ConfigParser()
    try:
        cp.read(path, encoding="utf-8")
        pipe = cp["pipeline"] if cp.has_section("pipeline") else {}
        shp = cp["sharpen"] if cp.has_section("sharpen") else {}
        prj = cp["projection"] if cp.has_section("projection") else {}
        clu = cp["clustering"] if cp.has_section("clustering") else {}
        datasets = [
            _dataset_from_section(s.split(":", 1)[1].strip(), cp[s]) for s in cp.sections() if s.startswith("dataset:")
        ]
        base_dir = path.parent
        for d in datasets:
            if d.path is not None and not Path(d.path).is_absolute():
                d.path = str(base_dir / d.path)
        cfg = PipelineConfig(
            datasets=datasets,
            conditions=_list(pipe.get("conditions", ",".join(CONDITIONS))),
            methods=_list(pipe.get("methods", ",".join(clustering.METHODS))),
            sharpen=sharpening.SharpenParams(
                k_neighbors=_opt(shp.get("k_neighbors", "auto"), int),
                step_size=float(shp.get("step_size", 0.3)),
                iterations=int(shp.get("iterations", 10)),
            ),
            projection=prj.get("method", "lmds"),
            dim=int(prj.get("dim", 2)),
            n_landmarks=_opt(prj.get("landmarks", "auto"), int),
            k=_opt(clu.get("k", "auto"), int),
            replicates=int(clu.get("replicates", 10)),
            max_iter=int(clu.get("max_iter", 100)),
            dbscan_eps=_opt(clu.get("dbscan_eps", "auto"), float),
            dbscan_min_pts=_opt(clu.get("dbscan_min_pts", "auto"), int),
            spectral_knn=_opt(clu.get("spectral_knn", "auto"), int),
            standardize=_bool(pipe.get("standardize", "false")),
            runs=int(pipe.get("runs", 1)),
            seed=int(pipe.get("seed", 0)),
            out_dir=pipe.get("out_dir", "runs/latest"),
            plots=_bool(pipe.get("plots", "true")),
        )
    except (configparser.Error, KeyError, ValueError) as exc:
        if isinstance(exc, SDRError):
            raise
        raise ConfigError(f"{path}: {exc}") from exc
    return cfg


# ---------------------------------------------------------------- stages


@contextmanager
def _stage(name: str, run_dir: Path):
    try:
        yield
    except Exception as exc:
        run_dir.mkdir(parents=True, exist_ok=True)
        (run_dir / "FAILED").write_text(f"stage: {name}\ncause: {type(exc).__name__}: {exc}\n", encoding="utf-8")
        if isinstance(exc, SDRError):
            raise type(exc)(f"stage {name!r} failed: {exc}") from exc
        if isinstance(exc, (FloatingPointError, np.linalg.LinAlgError, ArithmeticError)):
            raise NumericError(f"stage {name!r} failed: {exc}") from exc
        raise


def prepare_dataset(src: DatasetSource, standardize: bool, seed: int | None = None) -> dataset.Dataset:
    """Load or generate one dataset and apply regrouping, PCA and standardization."""
    if src.synth is not None:
        spec = replace(src.synth, seed=seed) if (src.resample and seed is not None) else src.synth
        data = synth.generate(spec)
    else:
        aux = tuple(src.aux_label_cols)
        if src.truth != "label" and src.truth not in aux:
            aux += (src.truth,)
        data = dataset.load_csv(src.path, label_column=src.label_col, aux_label_columns=aux, name=src.name)
    if data.labels is None:
        raise DataError(f"dataset {src.name!r} has no ground-truth labels; set label_col")
    if src.regroup is not None:
        if data.label_names is None:
            raise DataError(f"dataset {src.name!r}: regrouping needs named labels")
        cmap = dataset.ClassMap.from_names(data.label_names, REGROUPINGS[src.regroup])
        data = dataset.regroup_dataset(data, cmap)
    if src.pca_variance is not None:
        data, _ = projection.pca_reduce(data, src.pca_variance)
    if standardize:
        data = dataset.standardize(data)
    if src.truth != "label":
        if src.truth not in data.aux_labels:
            raise DataError(f"dataset {src.name!r} has no label column {src.truth!r}")
        data = data.with_labels(data.aux_labels[src.truth])
    return data


def _dataset_info(data: dataset.Dataset) -> dict:
    info = {"N": data.N, "n": data.n, "n_classes": data.n_classes}
    if "pca" in data.meta:
        info["pca"] = data.meta["pca"]
    return info


def _write_labels(path: Path, labels) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        fh.write("cluster\n")
        fh.writelines(f"{int(v)}\n" for v in labels)


def write_projection(path: Path, coords: np.ndarray, labels=None) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        cols = [f"p{j + 1}" for j in range(coords.shape[1])]
        w.writerow(cols + (["label"] if labels is not None else []))
        for i, row in enumerate(coords):
            cells = [format(v, ".17g") for v in row]
            if labels is not None:
                cells.append(str(int(labels[i])))
            w.writerow(cells)


def _dump_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n", encoding="utf-8")


def _json_default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, Path):
        return str(o)
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def run_cell_methods(points2d, truth, methods, k, cfg: PipelineConfig, seed: int):
    """Cluster one projection with each method and score against ``truth``."""
    out = []
    for method in methods:
        res = clustering.cluster(
            points2d,
            method,
            k=k,
            seed=seed,
            replicates=cfg.replicates,
            max_iter=cfg.max_iter,
            eps=cfg.dbscan_eps,
            min_pts=cfg.dbscan_min_pts,
            knn=cfg.spectral_knn,
        )
        out.append((method, res, metrics.evaluate(res.labels, truth)))
    return out


def run_pipeline(cfg: PipelineConfig, write: bool = True) -> PipelineResult:
    """Run every (dataset x condition x run x method) cell.

    With ``write`` the run directory gets a manifest, per-cell projection,
    label, report and SVG files, and summary tables; otherwise only the
    in-memory scores are returned.
    """
    cfg.validate()
    run_dir = Path(cfg.out_dir)
    if write:
        run_dir.mkdir(parents=True, exist_ok=True)
        failed = run_dir / "FAILED"
        if failed.exists():
            failed.unlink()
        _dump_json(run_dir / "manifest.json", cfg.manifest())
    cells: list[Cell] = []
    infos: dict = {}
    timings: dict = {}

    for src in cfg.datasets:
        static = None
        sharpened = None
        for run in range(cfg.runs):
            seed = cfg.seed + run
            with _stage("load", run_dir):
                if src.resample or static is None:
                    data = prepare_dataset(src, cfg.standardize, seed)
                    static, sharpened = data, None
                data = static
            infos[src.name] = _dataset_info(data)
            k = cfg.k if cfg.k is not None else data.n_classes
            for cond in cfg.conditions:
                tag = f"{src.name}/{cond}/run{run}"
                t0 = time.perf_counter()
                x = data
                if cond == "slmds":
                    with _stage("sharpen", run_dir):
                        if sharpened is None:
                            sharpened = sharpening.sharpen(data, cfg.sharpen)
                        x = sharpened
                with _stage("project", run_dir):
                    proj = projection.project(x, cfg.projection, cfg.dim, cfg.n_landmarks, seed)
                with _stage("cluster", run_dir):
                    results = run_cell_methods(proj.coords, data.labels, cfg.methods, k, cfg, seed)
                timings[tag] = time.perf_counter() - t0
                cell_dir = run_dir / "datasets" / src.name / cond / f"run{run}"
                if write:
                    with _stage("write", run_dir):
                        cell_dir.mkdir(parents=True, exist_ok=True)
                        write_projection(cell_dir / "projection.csv", proj.coords, data.labels)
                for method, res, rep in results:
                    cells.append(Cell(src.name, cond, method, run, seed, rep))
                    if not write:
                        continue
                    with _stage("write", run_dir):
                        _write_labels(cell_dir / f"{method}_labels.csv", res.labels)
                        _dump_json(
                            cell_dir / f"{method}_report.json",
                            {
                                "dataset": src.name,
                                "condition": cond,
                                "method": method,
                                "run": run,
                                "seed": seed,
                                "metrics": rep.as_dict(),
                                "n_clusters": res.n_clusters,
                                "params": res.params,
                                "warning": res.metadata.get("warning"),
                                "dataset_info": infos[src.name],
                                "projection": proj.meta,
                                "sharpen": x.meta.get("sharpen"),
                                "noise_policy": NOISE_POLICY,
                            },
                        )
                        if cfg.plots and proj.dim == 2:
                            plot_scatter(
                                proj.coords, res.labels, cell_dir / f"{method}.svg", f"{src.name} {cond} {method}"
                            )

    result = PipelineResult(run_dir, cells, infos)
    if write:
        with _stage("summary", run_dir):
            write_summaries(result, cfg)
            _dump_json(run_dir / "timings.json", timings)
    return result


def summary_rows(result: PipelineResult, cfg: PipelineConfig):
    """Long-format rows: dataset, condition, method, metric, mean, std, runs."""
    rows = []
    for src in cfg.datasets:
        for cond in cfg.conditions:
            for method in cfg.methods:
                for metric in METRICS:
                    vals = result.scores(src.name, cond, method, metric)
                    mu, sd = metrics.summarize(vals)
                    rows.append((src.name, cond, method, metric, mu, sd, len(vals)))
    return rows


def write_summaries(result: PipelineResult, cfg: PipelineConfig) -> None:
    rows = summary_rows(result, cfg)
    run_dir = result.run_dir
    with (run_dir / "summary.csv").open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["dataset", "condition", "method", "metric", "mean", "std", "runs"])
        for r in rows:
            w.writerow([*r[:4], f"{r[4]:.4f}", f"{r[5]:.4f}", r[6]])
    lookup = {r[:4]: r[4] for r in rows}
    for metric in METRICS:
        with (run_dir / f"summary_{metric}.csv").open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["dataset", "condition", *cfg.methods])
            for src in cfg.datasets:
                for cond in cfg.conditions:
                    w.writerow(
                        [src.name, cond.upper()]
                        + [f"{lookup[(src.name, cond, m, metric)]:.4f}" for m in cfg.methods]
                    )
    _dump_json(run_dir / "datasets.json", result.dataset_info)
