"""Lloyd's k-means with k-means++ seeding."""

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_array, check_is_fitted

_CHUNK = 4096


def _sq_distances(X, centers):
    out = np.empty((len(X), len(centers)))
    for start in range(0, len(X), _CHUNK):
        block = X[start:start + _CHUNK]
        diff = block[:, None, :] - centers[None, :, :]
        out[start:start + _CHUNK] = np.einsum("ijk,ijk->ij", diff, diff)
    return out


def kmeans_plusplus(X, n_clusters, rng):
    """Pick initial centres by D^2 sampling.

    When every remaining point coincides with a chosen centre the next
    centre is drawn uniformly (the data has fewer distinct points than
    clusters).
    """
    n = len(X)
    centers = np.empty((n_clusters, X.shape[1]))
    first = rng.integers(n)
    centers[0] = X[first]
    closest = ((X - X[first]) ** 2).sum(axis=1)
    for i in range(1, n_clusters):
        total = closest.sum()
        if total > 0:
            idx = int(np.searchsorted(np.cumsum(closest), rng.random() * total, side="right"))
            idx = min(idx, n - 1)
        else:
            idx = int(rng.integers(n))
        centers[i] = X[idx]
        closest = np.minimum(closest, ((X - X[idx]) ** 2).sum(axis=1))
    return centers


class KMeansPP(ClusterMixin, BaseEstimator):
    """k-means clustering (Lloyd iterations, k-means++ seeding).

    Stops after ``max_iter`` iterations or when no centre moves by ``tol``
    or more. A cluster that empties is re-seeded with the point farthest
    from its current centre. With fewer distinct points than clusters
    some clusters may stay empty.

    Attributes
    ----------
    cluster_centers_ : ndarray of shape (n_clusters, n_features)
    labels_ : ndarray of shape (n_samples,)
    n_iter_ : int
    """

    def __init__(self, n_clusters=8, max_iter=300, tol=1e-6, random_state=None):
        self.n_clusters = n_clusters
        self.max_iter = max_iter
        self.tol = tol
        self.random_state = random_state

    def fit(self, X, y=None):
        X = check_array(X, dtype=np.float64)
        n = len(X)
        if not 1 <= self.n_clusters <= n:
            raise ValueError(f"n_clusters={self.n_clusters} must be in [1, {n}]")
        rng = np.random.default_rng(self.random_state)
        centers = kmeans_plusplus(X, self.n_clusters, rng)
        n_iter = 0
        for n_iter in range(1, self.max_iter + 1):
            d2 = _sq_distances(X, centers)
            labels = d2.argmin(axis=1)
            new = centers.copy()
            counts = np.bincount(labels, minlength=self.n_clusters)
            filled = counts > 0
            sums = np.zeros_like(centers)
            np.add.at(sums, labels, X)
            new[filled] = sums[filled] / counts[filled, None]
            empty = np.flatnonzero(~filled)
            if len(empty):
                own = d2[np.arange(n), labels]
                for c, idx in zip(empty, np.argsort(-own, kind="stable")):
                    if own[idx] <= 0:
                        break
                    new[c] = X[idx]
            shift = np.sqrt(((new - centers) ** 2).sum(axis=1)).max()
            centers = new
            if shift < self.tol:
                break
        self.cluster_centers_ = centers
        self.labels_ = _sq_distances(X, centers).argmin(axis=1)
        self.n_iter_ = n_iter
        return self

    def predict(self, X):
        check_is_fitted(self)
        X = check_array(X, dtype=np.float64)
        return _sq_distances(X, self.cluster_centers_).argmin(axis=1)


@dataclass(frozen=True)
class Clustering:
    labels: np.ndarray
    n_clusters: int

    @property
    def sizes(self):
        return np.bincount(self.labels, minlength=self.n_clusters)

    def members(self):
        """Node indices of each cluster, ascending."""
        order = np.argsort(self.labels, kind="stable")
        bounds = np.cumsum(self.sizes)[:-1]
        return np.split(order, bounds)


def cluster_features(f, s, seed=None, max_iter=300, tol=1e-6):
    """k-means partition of the rows of an already standardised matrix."""
    f = np.asarray(f, dtype=float)
    if f.ndim == 1:
        f = f[:, None]
    km = KMeansPP(n_clusters=s, max_iter=max_iter, tol=tol, random_state=seed).fit(f)
    return Clustering(km.labels_, s)
