"""Synthetic benchmark graph made of Web, Star and dense-Star subgraphs.

Topologies (roots at layer 0):

* Web:   root linked to every layer-1 node, each layer-2 node hangs off a
         layer-1 node (round-robin), and each of the two outer layers is
         closed into a ring.
* Star:  the same two-level tree without rings.
* dStar: root linked to every layer-1 node, layer 1 is a clique.

Outer-layer nodes (w2, s2, ds1) are then joined by random edges until each
has at least one joining edge. The builders live in ``TOPOLOGIES`` and can
be replaced.
"""

from __future__ import annotations

import csv
import logging
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import GenerationError
from .graph import Graph

logger = logging.getLogger(__name__)

ROLES = ("w0", "w1", "w2", "s0", "s1", "s2", "ds0", "ds1")
BOUNDARY_ROLES = ("w2", "s2", "ds1")


@dataclass(frozen=True)
class SyntheticSpec:
    n_web: int = 200
    n_star: int = 200
    n_dstar: int = 200
    k_w1: int = 5
    k_w2: int = 10
    k_s1: int = 5
    k_s2: int = 10
    k_ds1: int = 5
    seed: int | None = 0

    def __post_init__(self):
        counts = (self.n_web, self.n_star, self.n_dstar)
        if min(counts) < 0:
            raise ValueError("subgraph counts must be >= 0")
        if sum(counts) < 1:
            raise ValueError("at least one subgraph is required")
        if min(self.k_w1, self.k_w2, self.k_s1, self.k_s2, self.k_ds1) < 1:
            raise ValueError("layer sizes must be >= 1")

    @property
    def n_nodes(self):
        return (self.n_web * (1 + self.k_w1 + self.k_w2)
                + self.n_star * (1 + self.k_s1 + self.k_s2)
                + self.n_dstar * (1 + self.k_ds1))


def _ring(nodes):
    if len(nodes) < 2:
        return []
    if len(nodes) == 2:
        return [(nodes[0], nodes[1])]
    return [(nodes[i], nodes[(i + 1) % len(nodes)]) for i in range(len(nodes))]


def _two_level(first, k1, k2, prefix, rings):
    root = first
    layer1 = list(range(first + 1, first + 1 + k1))
    layer2 = list(range(first + 1 + k1, first + 1 + k1 + k2))
    edges = [(root, u) for u in layer1]
    edges += [(layer1[j % k1], v) for j, v in enumerate(layer2)]
    if rings:
        edges += _ring(layer1) + _ring(layer2)
    roles = [f"{prefix}0"] + [f"{prefix}1"] * k1 + [f"{prefix}2"] * k2
    return roles, edges


def web(first, spec):
    return _two_level(first, spec.k_w1, spec.k_w2, "w", rings=True)


def star(first, spec):
    return _two_level(first, spec.k_s1, spec.k_s2, "s", rings=False)


def dstar(first, spec):
    layer = list(range(first + 1, first + 1 + spec.k_ds1))
    edges = [(first, u) for u in layer]
    edges += [(u, v) for i, u in enumerate(layer) for v in layer[i + 1:]]
    return ["ds0"] + ["ds1"] * spec.k_ds1, edges


TOPOLOGIES = {"web": web, "star": star, "dstar": dstar}


@dataclass(frozen=True)
class RoleLabeledGraph:
    graph: Graph
    roles: tuple
    subgraph: tuple
    join_edges: int
    uncovered: int = 0

    def role_counts(self):
        return {r: self.roles.count(r) for r in ROLES}


def generate(spec, topologies=None):
    """Build the benchmark graph described by ``spec``.

    Node ids are ``"0" .. "n-1"`` in construction order (all Web subgraphs,
    then Star, then dStar; root first within each). The joining loop picks
    two outer-layer nodes uniformly and adds the edge when they lie in
    different subgraphs and are not yet adjacent, until every outer-layer
    node has a joining edge. If no admissible edge can cover the remaining
    nodes (a lone subgraph) joining stops with a warning.
    """
    builders = dict(TOPOLOGIES)
    builders.update(topologies or {})
    roles, subgraph, edges = [], [], []
    plan = [("web", spec.n_web), ("star", spec.n_star), ("dstar", spec.n_dstar)]
    sid = 0
    for kind, count in plan:
        for _ in range(count):
            r, e = builders[kind](len(roles), spec)
            roles.extend(r)
            subgraph.extend([sid] * len(r))
            edges.extend(e)
            sid += 1
    boundary = np.array([i for i, r in enumerate(roles) if r in BOUNDARY_ROLES])
    if len(boundary) < 2:
        raise GenerationError("need at least two outer-layer nodes to join subgraphs")

    adj = [set() for _ in roles]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    rng = np.random.default_rng(spec.seed)
    covered = np.zeros(len(roles), dtype=bool)
    uncovered = len(boundary)
    joined = 0
    misses = 0
    while uncovered:
        a, b = rng.integers(len(boundary), size=2)
        u, v = int(boundary[a]), int(boundary[b])
        if subgraph[u] == subgraph[v] or v in adj[u]:
            misses += 1
            if misses >= 10 * len(boundary) and not _can_progress(boundary, covered, adj, subgraph):
                warnings.warn(f"{uncovered} outer-layer nodes could not be joined", stacklevel=2)
                break
            continue
        misses = 0
        adj[u].add(v)
        adj[v].add(u)
        edges.append((u, v))
        joined += 1
        for x in (u, v):
            if not covered[x]:
                covered[x] = True
                uncovered -= 1
    logger.info("joined %d edges over %d outer-layer nodes", joined, len(boundary))
    g = Graph([str(i) for i in range(len(roles))], np.array(edges, dtype=np.int64))
    return RoleLabeledGraph(g, tuple(roles), tuple(subgraph), joined, uncovered)


def _can_progress(boundary, covered, adj, subgraph):
    for u in boundary:
        if covered[u]:
            continue
        for v in boundary:
            if subgraph[v] != subgraph[u] and v not in adj[u]:
                return True
    return False


def export_labels(rg, path):
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["node_id", "role"])
        for u, r in zip(rg.graph.node_ids, rg.roles):
            w.writerow([u, r])


def load_labels(path):
    with Path(path).open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    return {u: r for u, r in rows[1:]}
