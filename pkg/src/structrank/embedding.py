"""Embedding matrices: CSV ingestion and synthetic baselines."""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import ParseError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EmbeddingMatrix:
    """``n x k`` node embedding; row ``i`` belongs to ``node_ids[i]``."""

    values: np.ndarray
    node_ids: tuple
    source_name: str = "embedding"
    dropped_ids: int = 0

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        if values.ndim != 2 or values.shape[1] < 1:
            raise ValueError("embedding must be a 2-D matrix with k >= 1")
        if values.shape[0] != len(self.node_ids):
            raise ValueError("one row per node is required")
        if not np.all(np.isfinite(values)):
            raise ValueError("embedding values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "node_ids", tuple(str(u) for u in self.node_ids))

    @property
    def dim(self):
        return self.values.shape[1]

    @property
    def shape(self):
        return self.values.shape

    def to_csv(self, path):
        with Path(path).open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["node_id", *(f"d{i}" for i in range(self.dim))])
            for u, row in zip(self.node_ids, self.values):
                w.writerow([u, *(repr(float(x)) for x in row)])


def _numeric(tokens):
    try:
        [float(t) for t in tokens]
    except ValueError:
        return False
    return True


def load_embedding(path, g, name=None):
    """Read an embedding CSV and align its rows with ``g.node_ids``.

    The first column holds node ids, the rest are coordinates. A header
    row is detected by a non-numeric coordinate cell in the first row.
    Ids unknown to the graph are dropped (counted in ``dropped_ids``).
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if rows and not _numeric(rows[0][1:]):
        start, rows = 2, rows[1:]
    else:
        start = 1
    if not rows:
        raise ParseError("embedding file has no rows", path=path)
    k = len(rows[0]) - 1
    if k < 1:
        raise ParseError("expected node_id plus at least one coordinate", path=path, line=start)
    ids, values = [], []
    for lineno, row in enumerate(rows, start=start):
        if len(row) != k + 1:
            raise ParseError(f"expected {k + 1} fields, got {len(row)}", path=path, line=lineno)
        coords = []
        for col, cell in enumerate(row[1:], start=2):
            try:
                coords.append(float(cell))
            except ValueError:
                raise ParseError(f"non-numeric value {cell!r}", path=path, line=lineno, column=col) from None
        ids.append(row[0].strip())
        values.append(coords)
    pos = {}
    for i, u in enumerate(ids):
        pos.setdefault(u, i)
    missing = [u for u in g.node_ids if u not in pos]
    if missing:
        raise KeyError(f"embedding lacks {len(missing)} graph nodes, first: {missing[:10]}")
    known = set(g.node_ids)
    extra = sum(1 for u in pos if u not in known)
    if extra:
        logger.warning("%s: dropped %d rows for ids not in the graph", path, extra)
    values = np.asarray(values)[[pos[u] for u in g.node_ids]]
    return EmbeddingMatrix(values, g.node_ids, name or path.stem, dropped_ids=extra)


def random_embedding(g, dims, seed=None, name="random"):
    """i.i.d. uniform[0, 1) coordinates; a negative control."""
    if dims < 1:
        raise ValueError("dims must be >= 1")
    rng = np.random.default_rng(seed)
    return EmbeddingMatrix(rng.random((g.n_nodes, dims)), g.node_ids, name)


def fixed_embedding(g, feature, dims, target_dim=0, seed=None, name="fixed"):
    """Copy ``feature`` into column ``target_dim``; fill the rest with noise.

    The filler is uniform[0, 1) from a generator seeded with ``seed``.
    """
    if dims < 1:
        raise ValueError("dims must be >= 1")
    if not 0 <= target_dim < dims:
        raise ValueError(f"target_dim must be in [0, {dims}), got {target_dim}")
    feature = np.asarray(feature, dtype=float).ravel()
    if feature.shape != (g.n_nodes,):
        raise ValueError("feature must have one value per node")
    rng = np.random.default_rng(seed)
    values = np.empty((g.n_nodes, dims))
    others = [j for j in range(dims) if j != target_dim]
    values[:, others] = rng.random((g.n_nodes, dims - 1))
    values[:, target_dim] = feature
    return EmbeddingMatrix(values, g.node_ids, name)
