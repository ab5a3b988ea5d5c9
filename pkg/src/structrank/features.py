"""Structural node features.

All kernels work on the undirected projection of the graph and return a
float vector aligned with ``g.node_ids``. Shortest-path features
(betweenness, closeness, harmonic, 2-hop size) share one compiled
breadth-first sweep that also accumulates Brandes dependencies.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sp
from numba import njit
from scipy.sparse.csgraph import connected_components

from .exceptions import ConvergenceError, ParseError


@dataclass(frozen=True)
class FeatureMatrix:
    """``n x l`` matrix of node features with named columns."""

    values: np.ndarray
    names: tuple
    node_ids: tuple

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        names = tuple(str(s) for s in self.names)
        if values.ndim != 2 or values.shape[1] != len(names):
            raise ValueError("values must be (n, len(names))")
        if values.shape[1] < 1:
            raise ValueError("at least one feature column is required")
        if len(set(names)) != len(names):
            raise ValueError("feature names must be unique")
        if values.shape[0] != len(self.node_ids):
            raise ValueError("one row per node is required")
        if not np.all(np.isfinite(values)):
            raise ValueError("feature values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "node_ids", tuple(str(u) for u in self.node_ids))

    @property
    def shape(self):
        return self.values.shape

    def column(self, name):
        return self.values[:, self.names.index(name)]

    def select(self, names):
        if isinstance(names, str):
            names = [names]
        missing = [s for s in names if s not in self.names]
        if missing:
            raise KeyError(f"unknown features: {missing}")
        cols = [self.names.index(s) for s in names]
        return FeatureMatrix(self.values[:, cols], tuple(names), self.node_ids)

    def to_csv(self, path):
        with Path(path).open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["node_id", *self.names])
            for u, row in zip(self.node_ids, self.values):
                w.writerow([u, *(repr(float(x)) for x in row)])


def load_features(path, g=None):
    """Read a ``node_id,<name>...`` CSV; rows are reordered to ``g`` if given."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ParseError("empty feature file", path=path)
    header, body = rows[0], rows[1:]
    if len(header) < 2:
        raise ParseError("expected node_id plus at least one feature column", path=path, line=1)
    ids, values = [], []
    for lineno, row in enumerate(body, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(row)}", path=path, line=lineno)
        ids.append(row[0])
        try:
            values.append([float(x) for x in row[1:]])
        except ValueError:
            bad = next(c for c, x in enumerate(row[1:], start=2) if not _is_float(x))
            raise ParseError(f"non-numeric value {row[bad - 1]!r}", path=path, line=lineno, column=bad) from None
    values = np.array(values, dtype=float).reshape(len(ids), len(header) - 1)
    if g is not None:
        pos = {u: i for i, u in enumerate(ids)}
        missing = [u for u in g.node_ids if u not in pos]
        if missing:
            raise KeyError(f"feature file lacks nodes: {missing[:10]}")
        values = values[[pos[u] for u in g.node_ids]]
        ids = list(g.node_ids)
    return FeatureMatrix(values, tuple(header[1:]), tuple(ids))


def _is_float(x):
    try:
        float(x)
    except ValueError:
        return False
    return True


def degree(g):
    return g.degree().astype(float)


def triangle_count(g):
    """Number of triangles through each node."""
    a = g.adjacency()
    return np.asarray((a @ a).multiply(a).sum(axis=1)).ravel() / 2.0


def local_clustering(g):
    deg = g.degree().astype(float)
    tri = triangle_count(g)
    out = np.zeros(g.n_nodes)
    ok = deg >= 2
    out[ok] = 2.0 * tri[ok] / (deg[ok] * (deg[ok] - 1.0))
    return out


@njit(cache=True)
def _sweep_kernel(indptr, indices, sources, with_betweenness):
    n = len(indptr) - 1
    closeness = np.zeros(n)
    harmonic = np.zeros(n)
    two_hop = np.zeros(n)
    bc = np.zeros(n)
    dist = np.full(n, -1, dtype=np.int64)
    sigma = np.zeros(n)
    delta = np.zeros(n)
    order = np.empty(n, dtype=np.int64)
    for s in sources:
        dist[s] = 0
        sigma[s] = 1.0
        order[0] = s
        head = 0
        tail = 1
        total = 0
        inv = 0.0
        near = 0
        while head < tail:
            v = order[head]
            head += 1
            dv = dist[v]
            if dv > 0:
                total += dv
                inv += 1.0 / dv
                if dv <= 2:
                    near += 1
            for p in range(indptr[v], indptr[v + 1]):
                w = indices[p]
                if dist[w] < 0:
                    dist[w] = dv + 1
                    order[tail] = w
                    tail += 1
                if dist[w] == dv + 1:
                    sigma[w] += sigma[v]
        if total > 0:
            closeness[s] = (tail - 1) / total
        harmonic[s] = inv
        two_hop[s] = near
        if with_betweenness:
            for i in range(tail - 1, 0, -1):
                w = order[i]
                coeff = (1.0 + delta[w]) / sigma[w]
                dw = dist[w]
                for p in range(indptr[w], indptr[w + 1]):
                    v = indices[p]
                    if dist[v] == dw - 1:
                        delta[v] += sigma[v] * coeff
                bc[w] += delta[w]
        for i in range(tail):
            w = order[i]
            dist[w] = -1
            sigma[w] = 0.0
            delta[w] = 0.0
    return closeness, harmonic, two_hop, bc


def _path_sweep(g, sources=None, betweenness=True):
    """Breadth-first search from every source (all nodes by default).

    Returns per-source closeness, harmonic and 2-hop size and, if
    requested, the raw Brandes dependency sum over the given sources (each
    unordered pair counted from both ends when all nodes are sources).
    """
    a = g.adjacency()
    n = g.n_nodes
    sources = np.arange(n, dtype=np.int64) if sources is None else np.asarray(sources, dtype=np.int64)
    closeness, harmonic, two_hop, bc = _sweep_kernel(
        a.indptr.astype(np.int64), a.indices.astype(np.int64), sources, betweenness
    )
    return {"closeness": closeness, "harmonic": harmonic, "two_hop": two_hop, "betweenness": bc}


def betweenness(g, n_pivots=None, seed=None):
    """Shortest-path betweenness normalised by ``(n-1)(n-2)/2``.

    Exact by default. With ``n_pivots`` the dependencies are accumulated
    from that many uniformly chosen source nodes and scaled by
    ``n / n_pivots`` (an unbiased estimate for large graphs).
    """
    n = g.n_nodes
    if n <= 2:
        return np.zeros(n)
    sources = None
    scale = 1.0
    if n_pivots is not None and n_pivots < n:
        rng = np.random.default_rng(seed)
        sources = np.sort(rng.choice(n, size=n_pivots, replace=False))
        scale = n / n_pivots
    raw = _path_sweep(g, sources, betweenness=True)["betweenness"] * scale
    # every unordered pair is accumulated from both endpoints
    return raw / ((n - 1) * (n - 2))


def closeness(g):
    """``(reachable - 1) / sum of distances`` inside each node's component."""
    return _path_sweep(g, betweenness=False)["closeness"]


def harmonic(g):
    return _path_sweep(g, betweenness=False)["harmonic"]


def two_hop_size(g):
    """Number of nodes at distance 1 or 2."""
    return _path_sweep(g, betweenness=False)["two_hop"]


def pagerank(g, damping=0.85, tol=1e-10, max_iter=200):
    n = g.n_nodes
    if n < 1:
        raise ValueError("pagerank needs at least one node")
    a = g.adjacency()
    deg = np.asarray(a.sum(axis=1)).ravel()
    dangling = deg == 0
    inv = np.divide(1.0, deg, out=np.zeros(n), where=~dangling)
    walk = (sp.diags(inv) @ a).T.tocsr()
    x = np.full(n, 1.0 / n)
    for it in range(1, max_iter + 1):
        nxt = damping * (walk @ x) + (damping * x[dangling].sum() + 1.0 - damping) / n
        residual = np.abs(nxt - x).sum()
        x = nxt
        if residual < tol:
            return x / x.sum()
    raise ConvergenceError("pagerank did not converge", max_iter)


def eigenvector(g, tol=1e-10, max_iter=1000):
    """Eigenvector centrality on the largest component, 0 elsewhere.

    Power iteration on ``A + I`` (same leading eigenvector as ``A``, but no
    oscillation on bipartite graphs), L2-normalised. Components tied for
    the largest size are each handled the same way, which keeps the result
    independent of node order.
    """
    n = g.n_nodes
    out = np.zeros(n)
    a = g.adjacency()
    _, labels = connected_components(a, directed=False)
    sizes = np.bincount(labels)
    for label in np.flatnonzero(sizes == sizes.max()):
        big = np.flatnonzero(labels == label)
        out[big] = _leading_vector(a[big][:, big], tol, max_iter)
    return out


def _leading_vector(sub, tol, max_iter):
    m = sub.shape[0]
    if m == 1:
        return np.ones(1)
    x = np.full(m, 1.0 / np.sqrt(m))
    for it in range(1, max_iter + 1):
        nxt = sub @ x + x
        nxt /= np.linalg.norm(nxt)
        if np.abs(nxt - x).sum() < tol:
            return nxt
        x = nxt
    raise ConvergenceError("eigenvector centrality did not converge", max_iter)


def core_number(g):
    """k-core index via bucket peeling (Batagelj & Zaversnik)."""
    a = g.adjacency()
    indptr, indices = a.indptr, a.indices
    deg = np.diff(indptr).astype(np.int64)
    n = len(deg)
    if n == 0:
        return np.zeros(0)
    order = np.argsort(deg, kind="stable")
    bin_start = np.zeros(deg.max() + 2, dtype=np.int64)
    np.add.at(bin_start, deg + 1, 1)
    bin_start = np.cumsum(bin_start)
    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(n)
    vert = order.copy()
    deg = deg.tolist()
    pos = pos.tolist()
    vert = vert.tolist()
    bins = bin_start.tolist()
    for i in range(n):
        v = vert[i]
        for u in indices[indptr[v]:indptr[v + 1]].tolist():
            if deg[u] > deg[v]:
                du, pu = deg[u], pos[u]
                pw = bins[du]
                w = vert[pw]
                if u != w:
                    vert[pu], vert[pw] = w, u
                    pos[u], pos[w] = pw, pu
                bins[du] += 1
                deg[u] -= 1
    return np.array(deg, dtype=float)


def avg_neighbor_degree(g):
    a = g.adjacency()
    deg = g.degree().astype(float)
    total = a @ deg
    return np.divide(total, deg, out=np.zeros(g.n_nodes), where=deg > 0)


def burts_constraint(g):
    """Burt's constraint with ``p_uv = 1/deg(u)``; 0 for isolated nodes.

    ``c(u) = sum over neighbours v of (p_uv + sum_w p_uw p_wv)^2``.
    """
    a = g.adjacency()
    deg = g.degree().astype(float)
    inv = np.divide(1.0, deg, out=np.zeros(g.n_nodes), where=deg > 0)
    p = (sp.diags(inv) @ a).tocsr()
    indirect = (p @ p).multiply(a)
    total = (p + indirect).tocsr()
    total.data **= 2
    return np.asarray(total.sum(axis=1)).ravel()


BASIC_FEATURES = (
    "degree",
    "local_clustering",
    "betweenness",
    "closeness",
    "harmonic",
    "pagerank",
)

BATTERY = (
    *BASIC_FEATURES,
    "burts_constraint",
    "eigenvector",
    "core_number",
    "triangle_count",
    "avg_neighbor_degree",
    "two_hop_size",
)

KERNELS = {
    "degree": degree,
    "local_clustering": local_clustering,
    "betweenness": betweenness,
    "closeness": closeness,
    "harmonic": harmonic,
    "pagerank": pagerank,
    "burts_constraint": burts_constraint,
    "eigenvector": eigenvector,
    "core_number": core_number,
    "triangle_count": triangle_count,
    "avg_neighbor_degree": avg_neighbor_degree,
    "two_hop_size": two_hop_size,
}

_SWEEP_FEATURES = {"betweenness", "closeness", "harmonic", "two_hop_size"}


def extended_battery(g, names=BATTERY, kernels=None):
    """Compute a battery of node features (the 12-column default).

    ``kernels`` may map extra names to ``f(graph) -> vector`` so users can
    add or replace features; shortest-path features are computed in a
    single shared sweep.
    """
    registry = dict(KERNELS)
    registry.update(kernels or {})
    names = tuple(names)
    unknown = [s for s in names if s not in registry]
    if unknown:
        raise KeyError(f"unknown features: {unknown}")
    sweep = None
    need = {s for s in names if s in _SWEEP_FEATURES and registry[s] is KERNELS[s]}
    if need:
        n = g.n_nodes
        sweep = _path_sweep(g, betweenness="betweenness" in need)
        if n > 2:
            sweep["betweenness"] = sweep["betweenness"] / ((n - 1) * (n - 2))
        else:
            sweep["betweenness"] = np.zeros(n)
        sweep["two_hop_size"] = sweep.pop("two_hop")
    cols = []
    for s in names:
        if sweep is not None and s in need:
            cols.append(sweep[s])
        else:
            cols.append(np.asarray(registry[s](g), dtype=float))
    return FeatureMatrix(np.column_stack(cols), names, g.node_ids)
