"""Fit per-dimension weights of the embedded distance to minimise psi."""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .metrics import psi


class PsiObjective:
    """psi as a function of the weight vector for a fixed pair sample.

    ``target`` holds the feature-space distances and ``sq_diff`` the
    per-pair squared embedding differences, so that the embedded distance
    for weights ``w`` is ``sqrt(sq_diff @ w)``. Negative weights (which a
    finite-difference probe at the lower bound can produce) are clipped
    to zero.
    """

    def __init__(self, target, sq_diff):
        self.target = np.asarray(target, dtype=float)
        self.sq_diff = np.asarray(sq_diff, dtype=float)
        self.n_calls = 0

    @property
    def dim(self):
        return self.sq_diff.shape[1]

    def distances(self, w):
        return np.sqrt(self.sq_diff @ np.maximum(w, 0.0))

    def __call__(self, w):
        self.n_calls += 1
        return psi(self.target, self.distances(w))

    def gradient(self, w, step=1e-6):
        """Central finite differences."""
        w = np.asarray(w, dtype=float)
        g = np.empty_like(w)
        for a in range(len(w)):
            up = w.copy()
            down = w.copy()
            up[a] += step
            down[a] -= step
            g[a] = (self(up) - self(down)) / (2.0 * step)
        return g

    def analytic_gradient(self, w):
        w = np.maximum(np.asarray(w, dtype=float), 0.0)
        y = np.sqrt(self.sq_diff @ w)
        x = self.target
        if np.ptp(x) == 0 or np.ptp(y) == 0:
            return np.zeros_like(w)
        xc = x - x.mean()
        yc = y - y.mean()
        sxx, syy = xc @ xc, yc @ yc
        r = (xc @ yc) / np.sqrt(sxx * syy)
        dr_dy = xc / np.sqrt(sxx * syy) - r * yc / syy
        inv = np.divide(0.5, y, out=np.zeros_like(y), where=y > 0)
        return -2.0 * r * ((dr_dy * inv) @ self.sq_diff)


@dataclass
class OptimizeResult:
    weights: np.ndarray
    psi: float
    psi_init: float
    iterations: int
    converged: bool
    restarts_used: int
    degenerate: bool = False
    trace: list = field(default_factory=list)


def normalize_weights(w):
    """L1-normalise; an all-zero vector maps to uniform weights."""
    w = np.maximum(np.asarray(w, dtype=float), 0.0)
    total = w.sum()
    if total <= 0 or not np.isfinite(total):
        return np.full(len(w), 1.0 / len(w)), True
    return w / total, False


def optimize_weights(objective, restarts=3, tol=1e-8, max_iter=200, gradient="central",
                     step=1e-6, seed=None):
    """Minimise ``objective`` over the box ``[0, 1]^k`` with L-BFGS-B.

    Each restart starts from a point drawn uniformly from the simplex; the
    best run is kept and its weights rescaled to unit L1 norm, which does
    not change psi. A run never ends above its own starting value.
    """
    k = objective.dim
    if k == 1:
        value = objective(np.ones(1))
        return OptimizeResult(np.ones(1), value, value, 0, True, 0)
    if gradient == "central":
        jac = lambda w: objective.gradient(w, step)  # noqa: E731
    elif gradient == "analytic":
        jac = objective.analytic_gradient
    else:
        raise ValueError(f"gradient must be 'central' or 'analytic', got {gradient!r}")
    rng = np.random.default_rng(seed)
    best = None
    trace = []
    for run in range(max(1, restarts)):
        w0 = rng.dirichlet(np.ones(k))
        start = objective(w0)
        res = minimize(
            objective,
            w0,
            jac=jac,
            method="L-BFGS-B",
            bounds=[(0.0, 1.0)] * k,
            # ftol is relative to max(|f|, 1) and psi <= 1, so it acts on |dpsi|
            options={"ftol": tol, "gtol": 1e-12, "maxiter": max_iter},
        )
        w, value = np.clip(res.x, 0.0, 1.0), objective(np.clip(res.x, 0.0, 1.0))
        if value > start:
            w, value = w0, start
        trace.append({"run": run, "psi_init": start, "psi": value, "iterations": int(res.nit),
                      "converged": bool(res.success), "message": str(res.message)})
        if best is None or value < best[1]:
            best = (w, value, start, int(res.nit), bool(res.success))
    w, value, start, nit, ok = best
    w, degenerate = normalize_weights(w)
    value = objective(w)
    return OptimizeResult(w, value, start, nit, ok, len(trace), degenerate, trace)
