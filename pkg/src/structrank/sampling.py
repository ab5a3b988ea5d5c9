"""Stratified sampling of node pairs within and between clusters.

Within-cluster pairs: a cluster is chosen with probability proportional
to the number of its pairs not yet sampled, then a uniform pair inside
it; pairs already in the sample are rejected. Between-cluster pairs work
the same way over cluster pairs ``(i, j), i < j`` with one uniform node
from each side.
"""

from dataclasses import dataclass, field

import numpy as np

# rejection loop gives up after this many attempts per requested pair
ATTEMPT_FACTOR = 100


@dataclass(frozen=True)
class PairSample:
    within: np.ndarray
    between: np.ndarray
    requested_within: int
    requested_between: int
    attempts: dict = field(default_factory=dict)

    @property
    def m_within(self):
        return len(self.within)

    @property
    def m_between(self):
        return len(self.between)

    @property
    def short(self):
        return self.m_within < self.requested_within or self.m_between < self.requested_between

    @property
    def pairs(self):
        return np.concatenate([self.within, self.between])


def pair_budget(sizes, within_fraction, n_pairs):
    """Return ``(m_within, m_between)``, each capped by its pool size."""
    sizes = np.asarray(sizes, dtype=np.int64)
    within_pool = int((sizes * (sizes - 1) // 2).sum())
    total = int(sizes.sum())
    between_pool = int((total * total - (sizes * sizes).sum()) // 2)
    m_within = min(int(np.floor(within_fraction * n_pairs)), within_pool)
    m_between = min(int(np.floor((1.0 - within_fraction) * n_pairs)), between_pool)
    return m_within, m_between


def within_cluster_probabilities(sizes, taken=None):
    """Probability of picking each cluster for the next within pair."""
    sizes = np.asarray(sizes, dtype=np.int64)
    left = sizes * (sizes - 1) // 2 - (0 if taken is None else np.asarray(taken))
    total = left.sum()
    return left / total if total > 0 else np.zeros(len(sizes))


def between_cluster_probabilities(sizes, taken=None):
    """Probability of each cluster pair ``(i, j)``, ``i < j``, as an s x s upper-triangular array."""
    sizes = np.asarray(sizes, dtype=np.int64)
    left = np.triu(np.outer(sizes, sizes), k=1)
    if taken is not None:
        left = left - np.triu(np.asarray(taken), k=1)
    total = left.sum()
    return left / total if total > 0 else np.zeros_like(left, dtype=float)


class _Uniforms:
    """Buffered uniform[0, 1) draws; the stream does not depend on chunking."""

    def __init__(self, rng, chunk=8192):
        self.rng = rng
        self.chunk = chunk
        self.buf = []
        self.pos = 0

    def below(self, n):
        """Uniform integer in ``[0, n)``."""
        if self.pos == len(self.buf):
            self.buf = self.rng.random(self.chunk).tolist()
            self.pos = 0
        u = self.buf[self.pos]
        self.pos += 1
        return min(int(u * n), n - 1)


class _Fenwick:
    """Prefix sums over non-negative integer weights with point updates."""

    def __init__(self, weights):
        self.size = len(weights)
        tree = [0] * (self.size + 1)
        for i, w in enumerate(weights, start=1):
            tree[i] += int(w)
            j = i + (i & -i)
            if j <= self.size:
                tree[j] += tree[i]
        self.tree = tree
        self.total = sum(int(w) for w in weights)
        self.top = 1 << (self.size.bit_length() - 1) if self.size else 0

    def add(self, i, delta):
        self.total += delta
        i += 1
        while i <= self.size:
            self.tree[i] += delta
            i += i & -i

    def find(self, r):
        """Smallest index whose inclusive prefix sum exceeds ``r``."""
        pos, step, tree = 0, self.top, self.tree
        while step:
            nxt = pos + step
            if nxt <= self.size and tree[nxt] <= r:
                pos = nxt
                r -= tree[nxt]
            step >>= 1
        return pos


def _sample_within(members, sizes, count, rng):
    weights = _Fenwick((sizes * (sizes - 1) // 2).tolist())
    draw = _Uniforms(rng)
    sizes = sizes.tolist()
    seen = set()
    out = []
    attempts = 0
    limit = ATTEMPT_FACTOR * count
    while len(out) < count and attempts < limit and weights.total > 0:
        attempts += 1
        i = weights.find(draw.below(weights.total))
        c = sizes[i]
        a = draw.below(c)
        b = draw.below(c - 1)
        if b >= a:
            b += 1
        u, v = members[i][a], members[i][b]
        key = (u, v) if u < v else (v, u)
        if key in seen:
            continue
        seen.add(key)
        out.append(key)
        weights.add(i, -1)
    return np.array(out, dtype=np.int64).reshape(-1, 2), attempts


def _sample_between(members, sizes, count, rng):
    rows, cols = np.triu_indices(len(sizes), k=1)
    weights = _Fenwick((sizes[rows] * sizes[cols]).tolist())
    draw = _Uniforms(rng)
    rows, cols, sizes = rows.tolist(), cols.tolist(), sizes.tolist()
    seen = set()
    out = []
    attempts = 0
    limit = ATTEMPT_FACTOR * count
    while len(out) < count and attempts < limit and weights.total > 0:
        attempts += 1
        t = weights.find(draw.below(weights.total))
        i, j = rows[t], cols[t]
        u = members[i][draw.below(sizes[i])]
        v = members[j][draw.below(sizes[j])]
        key = (u, v) if u < v else (v, u)
        if key in seen:
            continue
        seen.add(key)
        out.append(key)
        weights.add(t, -1)
    return np.array(out, dtype=np.int64).reshape(-1, 2), attempts


def sample_pairs(clustering, within_fraction=0.5, n_pairs=100_000, seed=None):
    """Draw unique within- and between-cluster node pairs.

    Pairs are returned as ``(u, v)`` with ``u < v``. The within and between
    draws use independent streams derived from ``seed``.
    """
    if not 0.0 <= within_fraction <= 1.0:
        raise ValueError("within_fraction must be in [0, 1]")
    if n_pairs < 1:
        raise ValueError("n_pairs must be >= 1")
    sizes = np.asarray(clustering.sizes, dtype=np.int64)
    members = [m.tolist() for m in clustering.members()]
    m_within, m_between = pair_budget(sizes, within_fraction, n_pairs)
    seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    rng_w, rng_b = (np.random.default_rng(s) for s in seq.spawn(2))
    within, tries_w = _sample_within(members, sizes, m_within, rng_w)
    between, tries_b = _sample_between(members, sizes, m_between, rng_b)
    return PairSample(within, between, m_within, m_between, {"within": tries_w, "between": tries_b})
