"""Sharpened Landmark MDS with automatic cluster labelling and external validation."""

from .clustering import ClusteringResult, cluster, dbscan, dbscan_auto_params, hc, kmeans, spectral
from .dataset import ClassMap, Dataset, load_csv, regroup, save_csv, standardize
from .metrics import MetricReport, accuracy, brute_force_accuracy, confusion, evaluate, nmi, purity
from .projection import Projection, classical_mds, lmds, pca_reduce
from .sharpening import SharpenParams, sharpen
from .synth import SynthSpec, generate

__version__ = "0.1.0"
