from .base import METHODS, ClusteringResult, log_rule
from .dbscan import dbscan, dbscan_auto_params, knee_index
from .hierarchical import hc, linkage_tree
from .kmeans import kmeans
from .spectral import normalized_laplacian, spectral
from .run import cluster

__all__ = [
    "METHODS",
    "ClusteringResult",
    "cluster",
    "dbscan",
    "dbscan_auto_params",
    "hc",
    "kmeans",
    "knee_index",
    "linkage_tree",
    "log_rule",
    "normalized_laplacian",
    "spectral",
]
