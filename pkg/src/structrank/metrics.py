import numpy as np


def squared_differences(m, pairs):
    """Per-pair, per-column squared differences, shape ``(len(pairs), k)``."""
    m = np.asarray(m, dtype=float)
    if m.ndim == 1:
        m = m[:, None]
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    diff = m[pairs[:, 0]] - m[pairs[:, 1]]
    return diff * diff


def feature_distances(f, pairs):
    """Euclidean distance between the two rows of each pair."""
    return np.sqrt(squared_differences(f, pairs).sum(axis=1))


def embedded_distances(e, w, pairs):
    """Weighted Euclidean distance ``sqrt(sum_a w_a (e_ia - e_ja)^2)``."""
    sq = squared_differences(e, pairs)
    w = np.asarray(w, dtype=float)
    if w.shape != (sq.shape[1],):
        raise ValueError(f"expected {sq.shape[1]} weights, got {w.shape}")
    return np.sqrt(sq @ w)


def pearson(x, y):
    """Pearson correlation; ``nan`` when either vector has no usable spread."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-D vectors of equal length")
    if len(x) < 2:
        raise ValueError("need at least two observations")
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        return np.nan
    xc = x - x.mean()
    yc = y - y.mean()
    denom = np.sqrt((xc @ xc) * (yc @ yc))
    # variance can underflow to zero for tiny (subnormal) spreads
    if not denom > 0 or not np.isfinite(denom):
        return np.nan
    return float(np.clip((xc @ yc) / denom, -1.0, 1.0))


def psi(d_f, d_e):
    """``1 - r^2`` for the Pearson ``r`` of the two distance vectors.

    Returns 1 when either vector has zero variance.
    """
    r = pearson(d_f, d_e)
    if np.isnan(r):
        return 1.0
    return float(min(1.0, max(0.0, 1.0 - r * r)))
