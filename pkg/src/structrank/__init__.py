"""Unsupervised ranking of structural node embeddings."""

__version__ = "0.1.0"

from .cluster import Clustering, KMeansPP, cluster_features
from .embedding import EmbeddingMatrix, fixed_embedding, load_embedding, random_embedding
from .evaluator import EvalParams, EvalResult, StructuralEmbeddingEvaluator, evaluate
from .exceptions import ConvergenceError, GenerationError, ParseError, StructRankError
from .features import BATTERY, FeatureMatrix, extended_battery, load_features
from .graph import Graph, GraphStats, compute_stats, load_edge_list, save_edge_list
from .metrics import embedded_distances, feature_distances, pearson, psi
from .optimize import optimize_weights
from .preprocessing import standardize
from .report import RankingReport, convergence_study, emit_report, rank
from .sampling import PairSample, sample_pairs
from .synthetic import RoleLabeledGraph, SyntheticSpec, export_labels, generate

__all__ = [
    "BATTERY",
    "Clustering",
    "ConvergenceError",
    "EmbeddingMatrix",
    "EvalParams",
    "EvalResult",
    "FeatureMatrix",
    "GenerationError",
    "Graph",
    "GraphStats",
    "KMeansPP",
    "PairSample",
    "ParseError",
    "RankingReport",
    "RoleLabeledGraph",
    "StructRankError",
    "StructuralEmbeddingEvaluator",
    "SyntheticSpec",
    "cluster_features",
    "compute_stats",
    "convergence_study",
    "embedded_distances",
    "emit_report",
    "evaluate",
    "export_labels",
    "extended_battery",
    "feature_distances",
    "fixed_embedding",
    "generate",
    "load_edge_list",
    "load_embedding",
    "load_features",
    "optimize_weights",
    "pearson",
    "psi",
    "random_embedding",
    "rank",
    "sample_pairs",
    "save_edge_list",
    "standardize",
]
