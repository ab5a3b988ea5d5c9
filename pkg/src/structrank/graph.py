"""Simple graph container, edge-list ingestion and summary statistics."""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .exceptions import ParseError

logger = logging.getLogger(__name__)

_DELIMITERS = {"auto": None, "space": " ", "tab": "\t", "comma": ","}


@dataclass(frozen=True)
class IngestReport:
    self_loops_dropped: int = 0
    duplicates_dropped: int = 0
    weighted: bool = False
    # Edge weights are parsed and preserved, but no structural feature reads them.
    weights_used_by_features: bool = False


class Graph:
    """Immutable simple graph with string node labels.

    Nodes are indexed ``0..n-1`` in the order of ``node_ids``. Undirected
    edges are stored once with ``u < v``; directed edges keep their
    orientation. Use :meth:`from_edges` to build a graph from raw,
    possibly dirty, edge data.
    """

    def __init__(self, node_ids, edges, directed=False, weights=None, report=None):
        self._node_ids = tuple(str(u) for u in node_ids)
        if len(set(self._node_ids)) != len(self._node_ids):
            raise ValueError("node_ids must be unique")
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        n = len(self._node_ids)
        if edges.size and (edges.min() < 0 or edges.max() >= n):
            raise ValueError("edge endpoint out of range")
        if np.any(edges[:, 0] == edges[:, 1]):
            raise ValueError("self-loops are not allowed; use Graph.from_edges")
        if not directed:
            edges = np.sort(edges, axis=1)
        keys = edges[:, 0] * max(n, 1) + edges[:, 1]
        if len(np.unique(keys)) != len(keys):
            raise ValueError("duplicate edges are not allowed; use Graph.from_edges")
        if weights is not None:
            weights = np.asarray(weights, dtype=float)
            if weights.shape != (len(edges),):
                raise ValueError("weights must have one entry per edge")
            weights.setflags(write=False)
        edges.setflags(write=False)
        self._edges = edges
        self._weights = weights
        self._directed = bool(directed)
        self.report = report if report is not None else IngestReport(weighted=weights is not None)

    @classmethod
    def from_edges(cls, edges, node_ids=None, directed=False, weights=None):
        """Build a graph from (src, dst) label pairs.

        Self-loops and repeated edges are dropped and counted in
        ``graph.report``; for undirected graphs ``(u, v)`` and ``(v, u)``
        are the same edge. Labels are registered in order of first
        appearance, after any labels given in ``node_ids`` (which lets
        callers declare isolated nodes).
        """
        index = {}
        order = []
        for u in node_ids or ():
            u = str(u)
            if u not in index:
                index[u] = len(order)
                order.append(u)

        def intern(u):
            u = str(u)
            i = index.get(u)
            if i is None:
                i = index[u] = len(order)
                order.append(u)
            return i

        seen = set()
        kept, kept_w = [], []
        loops = dups = 0
        weights = list(weights) if weights is not None else None
        for pos, (a, b) in enumerate(edges):
            i, j = intern(a), intern(b)
            if i == j:
                loops += 1
                continue
            key = (i, j) if directed or i < j else (j, i)
            if key in seen:
                dups += 1
                continue
            seen.add(key)
            kept.append(key)
            if weights is not None:
                kept_w.append(float(weights[pos]))
        if loops or dups:
            logger.warning("dropped %d self-loops and %d duplicate edges", loops, dups)
        report = IngestReport(loops, dups, weighted=weights is not None)
        return cls(
            order,
            np.array(kept, dtype=np.int64).reshape(-1, 2),
            directed=directed,
            weights=np.array(kept_w) if weights is not None else None,
            report=report,
        )

    @property
    def node_ids(self):
        return self._node_ids

    @property
    def edges(self):
        return self._edges

    @property
    def weights(self):
        return self._weights

    @property
    def directed(self):
        return self._directed

    @property
    def n_nodes(self):
        return len(self._node_ids)

    @property
    def n_edges(self):
        return len(self._edges)

    def __len__(self):
        return self.n_nodes

    def __repr__(self):
        kind = "directed" if self._directed else "undirected"
        return f"Graph(n={self.n_nodes}, m={self.n_edges}, {kind})"

    @cached_property
    def index(self):
        """Mapping from node label to internal index."""
        return {u: i for i, u in enumerate(self._node_ids)}

    @cached_property
    def _out_csr(self):
        n = self.n_nodes
        e = self._edges
        if not self._directed:
            e = np.concatenate([e, e[:, ::-1]])
        data = np.ones(len(e))
        m = sp.csr_matrix((data, (e[:, 0], e[:, 1])), shape=(n, n))
        m.sort_indices()
        return m

    @cached_property
    def _undirected_csr(self):
        if not self._directed:
            return self._out_csr
        a = self._out_csr
        m = ((a + a.T) > 0).astype(float).tocsr()
        m.sort_indices()
        return m

    def adjacency(self, undirected=True):
        """0/1 adjacency as a CSR matrix.

        With ``undirected=True`` a directed graph is projected by ignoring
        orientation; reciprocal edges collapse into one.
        """
        return self._undirected_csr if undirected or not self._directed else self._out_csr

    def neighbors(self, u, undirected=True):
        a = self.adjacency(undirected)
        return a.indices[a.indptr[u]:a.indptr[u + 1]]

    def degree(self):
        """Degrees of the undirected projection."""
        return np.diff(self._undirected_csr.indptr).astype(np.int64)

    def to_undirected(self):
        if not self._directed:
            return self
        a = sp.triu(self._undirected_csr, k=1).tocoo()
        edges = np.column_stack([a.row, a.col])
        return Graph(self._node_ids, edges, directed=False)

    def permute(self, order):
        """Return the same graph with node ``order[i]`` moved to position ``i``."""
        order = np.asarray(order)
        inverse = np.empty_like(order)
        inverse[order] = np.arange(len(order))
        return Graph(
            [self._node_ids[i] for i in order],
            inverse[self._edges],
            directed=self._directed,
            weights=self._weights,
            report=self.report,
        )


def _detect_delimiter(line):
    if "," in line:
        return ","
    if "\t" in line:
        return "\t"
    return None


def load_edge_list(path, directed=False, delimiter="auto"):
    """Read a ``src dst [weight]`` edge list.

    Lines starting with ``#`` and blank lines are skipped. ``delimiter`` is
    one of ``auto``, ``space``, ``tab``, ``comma`` or a literal character;
    ``auto`` picks comma, then tab, then whitespace based on the first data
    line.
    """
    path = Path(path)
    sep = _DELIMITERS.get(delimiter, delimiter)
    detect = delimiter == "auto"
    edges, weights = [], []
    any_weight = False
    with path.open(encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if detect:
                sep = _detect_delimiter(line)
                detect = False
            tokens = line.split(sep) if sep not in (None, " ") else line.split()
            tokens = [t.strip() for t in tokens]
            if len(tokens) not in (2, 3) or not all(tokens[:2]):
                raise ParseError(
                    f"expected 2 or 3 fields, got {len(tokens)}", path=path, line=lineno
                )
            edges.append((tokens[0], tokens[1]))
            if len(tokens) == 3:
                try:
                    weights.append(float(tokens[2]))
                except ValueError:
                    raise ParseError(
                        f"non-numeric weight {tokens[2]!r}", path=path, line=lineno
                    ) from None
                any_weight = True
            else:
                weights.append(np.nan)
    if not edges:
        raise ParseError("edge list contains no edges", path=path)
    return Graph.from_edges(edges, directed=directed, weights=weights if any_weight else None)


def save_edge_list(g, path, delimiter=" "):
    ids = g.node_ids
    with Path(path).open("w", encoding="utf-8") as fh:
        for pos, (u, v) in enumerate(g.edges):
            if g.weights is not None:
                fh.write(f"{ids[u]}{delimiter}{ids[v]}{delimiter}{float(g.weights[pos])!r}\n")
            else:
                fh.write(f"{ids[u]}{delimiter}{ids[v]}\n")


@dataclass
class GraphStats:
    node_count: int
    edge_count: int
    min_degree: int
    max_degree: int
    avg_degree: float
    median_degree: float
    degree_q99: float
    component_count: int
    largest_component_size: int
    isolated_node_count: int
    global_clustering: float
    avg_local_clustering: float
    directed: bool = False
    projected_to_undirected: bool = False
    projected_edge_count: int = field(default=0)

    def to_dict(self):
        return asdict(self)

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent)


def compute_stats(g):
    """Basic statistics of ``g``, computed on its undirected projection.

    ``edge_count`` is the number of edges as ingested (directed edges
    counted individually); ``projected_edge_count`` counts the edges of the
    undirected projection that all degree and clustering values use.
    """
    from .features import local_clustering, triangle_count

    n = g.n_nodes
    if n < 1:
        raise ValueError("graph has no nodes")
    a = g.adjacency(undirected=True)
    deg = g.degree()
    n_comp, labels = connected_components(a, directed=False)
    sizes = np.bincount(labels)
    tri = triangle_count(g)
    triples = (deg * (deg - 1) / 2.0).sum()
    return GraphStats(
        node_count=n,
        edge_count=g.n_edges,
        min_degree=int(deg.min()),
        max_degree=int(deg.max()),
        avg_degree=float(deg.mean()),
        median_degree=float(np.median(deg)),
        degree_q99=float(np.quantile(deg, 0.99)),
        component_count=int(n_comp),
        largest_component_size=int(sizes.max()),
        isolated_node_count=int((deg == 0).sum()),
        global_clustering=float(tri.sum() / triples) if triples > 0 else 0.0,
        avg_local_clustering=float(local_clustering(g).mean()),
        directed=g.directed,
        projected_to_undirected=g.directed,
        projected_edge_count=int(a.nnz // 2),
    )
