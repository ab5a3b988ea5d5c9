"""Unsupervised scoring of an embedding against structural node features.

The pipeline standardises features and embedding, clusters nodes in
feature space with k-means, samples node pairs within and between
clusters, and compares feature-space distances with weighted
embedding-space distances through ``psi = 1 - r^2``. The per-dimension
weights are then optimised to minimise psi.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, clone
from sklearn.utils.validation import check_array, check_consistent_length, check_is_fitted

from .cluster import Clustering, KMeansPP
from .metrics import feature_distances, pearson, psi, squared_differences
from .optimize import PsiObjective, optimize_weights
from .preprocessing import make_scaler
from .sampling import sample_pairs

MAX_PAIRS = 100_000


def default_clusters(n):
    """``sqrt(n)`` rounded half up, clamped to ``[2, n]``."""
    return int(min(max(math.floor(math.sqrt(n) + 0.5), 2), n))


def default_pairs(n, s):
    return int(min(MAX_PAIRS, (n * n) // s))


@dataclass(frozen=True)
class EvalParams:
    """Evaluation settings; ``None`` means the size-dependent default."""

    s: int | None = None
    p: float = 0.5
    c: int | None = None
    scaler: str = "standard"
    seed: int = 0
    tol: float = 1e-8
    max_iter: int = 200
    restarts: int = 3
    gradient: str = "central"

    def resolve(self, n):
        """Concrete ``(s, c)`` for a graph with ``n`` nodes; validates ranges."""
        if n < 2:
            raise ValueError("need at least two nodes")
        s = default_clusters(n) if self.s is None else int(self.s)
        if not 2 <= s <= n:
            raise ValueError(f"number of clusters must be in [2, {n}], got {s}")
        c = default_pairs(n, s) if self.c is None else int(self.c)
        if c < 1:
            raise ValueError("pair budget must be >= 1")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("within-cluster fraction must be in [0, 1]")
        return s, c

    def estimator(self):
        return StructuralEmbeddingEvaluator(
            n_clusters=self.s,
            within_fraction=self.p,
            n_pairs=self.c,
            scaler=self.scaler,
            restarts=self.restarts,
            tol=self.tol,
            max_iter=self.max_iter,
            gradient=self.gradient,
            random_state=self.seed,
        )


@dataclass
class EvalResult:
    psi_pre: float
    psi_post: float
    weights: list
    r_pre: float
    r_post: float
    m_within: int
    m_between: int
    cluster_sizes: list
    optimizer: dict
    sample: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent, allow_nan=True)

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


def _nan_to_none(x):
    return None if x is None or (isinstance(x, float) and math.isnan(x)) else float(x)


class StructuralEmbeddingEvaluator(BaseEstimator):
    """Score how well an embedding reconstructs distances between node features.

    ``fit(X, y)`` takes the embedding ``X`` (n x k) and the features ``y``
    (n or n x l), runs the full pipeline and stores the optimised weights.
    ``transform`` maps an embedding into the weighted space, where plain
    Euclidean distance equals the fitted weighted distance.

    Parameters
    ----------
    n_clusters : int or None
        k-means clusters in feature space; default ``round(sqrt(n))``.
    within_fraction : float
        Share of sampled pairs drawn inside clusters.
    n_pairs : int or None
        Total pair budget; default ``min(1e5, n^2 / n_clusters)``.
    scaler : {"standard", "minmax"}
    restarts : int
        Random simplex starts for the weight optimiser.
    tol, max_iter : float, int
        Optimiser stopping rule (absolute change of psi, iterations).
    gradient : {"central", "analytic"}
    random_state : int or None

    Attributes
    ----------
    weights_ : ndarray of shape (k,)
        Non-negative, sums to one.
    psi_pre_, psi_post_ : float
        psi at uniform weights and after optimisation.
    labels_ : ndarray of shape (n,)
        Cluster of each node.
    pairs_ : PairSample
    result_ : EvalResult
    """

    def __init__(self, n_clusters=None, within_fraction=0.5, n_pairs=None, scaler="standard",
                 restarts=3, tol=1e-8, max_iter=200, gradient="central", kmeans_max_iter=300,
                 kmeans_tol=1e-6, random_state=0):
        self.n_clusters = n_clusters
        self.within_fraction = within_fraction
        self.n_pairs = n_pairs
        self.scaler = scaler
        self.restarts = restarts
        self.tol = tol
        self.max_iter = max_iter
        self.gradient = gradient
        self.kmeans_max_iter = kmeans_max_iter
        self.kmeans_tol = kmeans_tol
        self.random_state = random_state

    def _params(self):
        return EvalParams(self.n_clusters, self.within_fraction, self.n_pairs, self.scaler,
                          self.random_state, self.tol, self.max_iter, self.restarts, self.gradient)

    def _standardize(self, m):
        scaler = clone(make_scaler(self.scaler))
        out = scaler.fit_transform(m)
        out[:, np.ptp(m, axis=0) == 0] = 0.0
        return scaler, out

    def fit(self, X, y):
        X = check_array(X, dtype=np.float64)
        y = check_array(y, dtype=np.float64, ensure_2d=False)
        if y.ndim == 1:
            y = y[:, None]
        check_consistent_length(X, y)
        n = X.shape[0]
        s, c = self._params().resolve(n)
        kmeans_seed, sample_seed, opt_seed = np.random.SeedSequence(self.random_state).spawn(3)

        self.feature_scaler_, f = self._standardize(y)
        self.embedding_scaler_, e = self._standardize(X)

        km = KMeansPP(s, max_iter=self.kmeans_max_iter, tol=self.kmeans_tol,
                      random_state=np.random.default_rng(kmeans_seed)).fit(f)
        clustering = Clustering(km.labels_, s)
        pairs = sample_pairs(clustering, self.within_fraction, c, seed=sample_seed)
        all_pairs = pairs.pairs
        if len(all_pairs) < 2:
            raise ValueError("fewer than two node pairs could be sampled")

        target = feature_distances(f, all_pairs)
        objective = PsiObjective(target, squared_differences(e, all_pairs))
        k = X.shape[1]
        uniform = np.full(k, 1.0 / k)
        psi_pre = objective(uniform)
        r_pre = pearson(target, objective.distances(uniform))
        opt = optimize_weights(objective, restarts=self.restarts, tol=self.tol,
                               max_iter=self.max_iter, gradient=self.gradient,
                               seed=np.random.default_rng(opt_seed))
        r_post = pearson(target, objective.distances(opt.weights))

        self.n_features_in_ = k
        self.labels_ = clustering.labels
        self.cluster_sizes_ = clustering.sizes
        self.pairs_ = pairs
        self.weights_ = opt.weights
        self.psi_pre_ = psi_pre
        self.psi_post_ = opt.psi
        self.optimizer_ = opt
        self.result_ = EvalResult(
            psi_pre=float(psi_pre),
            psi_post=float(opt.psi),
            weights=[float(x) for x in opt.weights],
            r_pre=_nan_to_none(r_pre),
            r_post=_nan_to_none(r_post),
            m_within=pairs.m_within,
            m_between=pairs.m_between,
            cluster_sizes=[int(x) for x in clustering.sizes],
            optimizer={
                "iterations": opt.iterations,
                "converged": opt.converged,
                "restarts_used": opt.restarts_used,
                "degenerate": opt.degenerate,
                "psi_init": float(opt.psi_init),
            },
            sample={
                "n_clusters": s,
                "n_pairs": c,
                "requested_within": pairs.requested_within,
                "requested_between": pairs.requested_between,
                "short": pairs.short,
                "kmeans_iterations": int(km.n_iter_),
            },
        )
        return self

    def transform(self, X):
        """Standardise ``X`` and scale column ``a`` by ``sqrt(weights_[a])``."""
        check_is_fitted(self)
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} columns, got {X.shape[1]}")
        _, e = self._standardize(X)
        return e * np.sqrt(self.weights_)

    def score(self, X, y):
        """``1 - psi`` (that is ``r^2``) of ``X`` against ``y`` with the fitted weights and pairs."""
        check_is_fitted(self)
        X = check_array(X, dtype=np.float64)
        y = check_array(y, dtype=np.float64, ensure_2d=False)
        if y.ndim == 1:
            y = y[:, None]
        _, f = self._standardize(y)
        pairs = self.pairs_.pairs
        return 1.0 - psi(feature_distances(f, pairs), feature_distances(self.transform(X), pairs))


def _as_matrix(obj, node_ids):
    values = getattr(obj, "values", obj)
    ids = getattr(obj, "node_ids", None)
    if ids is not None and node_ids is not None and tuple(ids) != tuple(node_ids):
        raise ValueError("node order of inputs does not match the graph")
    return np.asarray(values, dtype=float)


def evaluate(g, features, embedding, params=None):
    """Run the full pipeline for one feature block and one embedding.

    ``features`` and ``embedding`` may be :class:`FeatureMatrix` /
    :class:`EmbeddingMatrix` objects (node order is checked against ``g``)
    or plain arrays. ``g`` may be ``None`` when arrays are given.
    """
    params = params or EvalParams()
    node_ids = g.node_ids if g is not None else None
    f = _as_matrix(features, node_ids)
    e = _as_matrix(embedding, node_ids)
    return params.estimator().fit(e, f).result_
