"""Batch evaluation, embedding rankings and convergence studies."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from .evaluator import EvalParams, evaluate


def repeat_seed(master, i):
    """Seed of the ``i``-th repeated run.

    Run 0 uses ``master`` itself; later runs use a counter-keyed
    ``SeedSequence`` so appending repeats never changes earlier ones.
    """
    if i == 0:
        return int(master)
    return int(np.random.SeedSequence([int(master), int(i)]).generate_state(1, np.uint32)[0])


@dataclass
class RankingReport:
    rows: list
    aggregate: dict
    ranking: list
    params: dict
    seed: int
    version: str = __version__
    graph: dict = field(default_factory=dict)

    @property
    def failures(self):
        return [r for r in self.rows if r.get("error")]

    def to_dict(self):
        return asdict(self)

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, d):
        return cls(**d)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def _named(embeddings):
    if isinstance(embeddings, dict):
        items = list(embeddings.items())
    else:
        items = [(getattr(e, "source_name", f"embedding{i}"), e) for i, e in enumerate(embeddings)]
    names = [n for n, _ in items]
    if len(set(names)) != len(names):
        raise ValueError(f"embedding names must be unique: {names}")
    return items


def rank(g, features, embeddings, params=None, feature_names=None, joint=False, workers=1):
    """Evaluate every (embedding, feature) pair and rank the embeddings.

    Each feature is scored on its own unless ``joint`` is set, in which
    case the selected features form one block. All pairs share
    ``params.seed``. Embeddings are ordered by ascending mean psi_post over
    their rows, ties broken by name; an embedding whose every row failed
    sorts last. Failures are recorded in the row's ``error`` field.
    """
    params = params or EvalParams()
    items = _named(embeddings)
    if not items:
        raise ValueError("at least one embedding is required")
    names = list(feature_names or features.names)
    blocks = [names] if joint else [[s] for s in names]
    jobs = [(en, e, block) for en, e in items for block in blocks]

    def run(job):
        en, e, block = job
        row = {"embedding": en, "feature": "+".join(block)}
        try:
            res = evaluate(g, features.select(block), e, params)
        except Exception as exc:  # recorded per row, never fatal
            row.update(psi_pre=None, psi_post=None, weights=None, diagnostics=None,
                       error=f"{type(exc).__name__}: {exc}")
        else:
            d = res.to_dict()
            row.update(psi_pre=d.pop("psi_pre"), psi_post=d.pop("psi_post"),
                       weights=d.pop("weights"), diagnostics=d, error=None)
        return row

    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            rows = list(pool.map(run, jobs))
    else:
        rows = [run(j) for j in jobs]

    aggregate = {}
    for en, _ in items:
        vals = [r["psi_post"] for r in rows if r["embedding"] == en and r["psi_post"] is not None]
        aggregate[en] = float(np.mean(vals)) if vals else None
    ranking = sorted(aggregate, key=lambda en: (aggregate[en] is None, aggregate[en] or 0.0, en))
    return RankingReport(
        rows=rows,
        aggregate=aggregate,
        ranking=ranking,
        params=asdict(params),
        seed=params.seed,
        graph={"n_nodes": g.n_nodes, "directed": g.directed, "projected_to_undirected": g.directed}
        if g is not None else {},
    )


def convergence_study(g, feature, embedding, vary="clusters", grid=(0.01, 0.02, 0.05, 0.1),
                      repeats=10, params=None):
    """psi_post as a function of cluster count or pair budget.

    For each fraction ``x`` in ``grid`` the varied parameter is set to
    ``ceil(x * n)`` (cluster counts clamped to ``[2, n]``), the rest stay
    at ``params``, and ``repeats`` seeds are run. Returns a dict with one
    row per fraction (mean and population stdev of psi_post) and the
    long-run reference, i.e. the mean at the largest fraction.
    """
    if vary not in ("clusters", "pairs"):
        raise ValueError("vary must be 'clusters' or 'pairs'")
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    grid = sorted(float(x) for x in grid)
    if not grid or grid[0] <= 0 or grid[-1] > 1:
        raise ValueError("grid fractions must lie in (0, 1]")
    params = params or EvalParams()
    n = g.n_nodes
    rows = []
    for x in grid:
        value = math.ceil(x * n)
        if vary == "clusters":
            value = min(max(value, 2), n)
            base = replace(params, s=value)
        else:
            base = replace(params, c=value)
        runs = []
        for i in range(repeats):
            res = evaluate(g, feature, embedding, replace(base, seed=repeat_seed(params.seed, i)))
            runs.append(res.psi_post)
        rows.append({
            "fraction": x,
            vary: value,
            "psi_mean": float(np.mean(runs)),
            "psi_std": float(np.std(runs)),
            "runs": runs,
        })
    return {"vary": vary, "n_nodes": n, "repeats": repeats, "rows": rows,
            "long_run": rows[-1]["psi_mean"]}


def _csv_text(report):
    k = max((len(r["weights"]) for r in report.rows if r["weights"]), default=0)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["embedding", "feature", "psi_pre", "psi_post", *(f"w{i}" for i in range(k)), "error"])
    for r in report.rows:
        weights = list(r["weights"] or [])
        weights += [""] * (k - len(weights))
        w.writerow([r["embedding"], r["feature"], _fmt(r["psi_pre"]), _fmt(r["psi_post"]),
                    *(_fmt(x) for x in weights), r["error"] or ""])
    return buf.getvalue()


def _fmt(x):
    return "" if x is None or x == "" else repr(float(x))


def _markdown_text(report):
    lines = ["| embedding | feature | psi_pre | psi_post | top dimension |",
             "|---|---|---|---|---|"]
    for r in report.rows:
        if r["error"]:
            lines.append(f"| {r['embedding']} | {r['feature']} | - | - | error: {r['error']} |")
            continue
        top = int(np.argmax(r["weights"]))
        lines.append(f"| {r['embedding']} | {r['feature']} | {r['psi_pre']:.4f} | "
                     f"{r['psi_post']:.4f} | d{top} ({r['weights'][top]:.3f}) |")
    lines.append("")
    lines.append("Ranking (mean psi_post, lower is better):")
    lines.append("")
    for i, en in enumerate(report.ranking, start=1):
        agg = report.aggregate[en]
        lines.append(f"{i}. {en}: {'n/a' if agg is None else f'{agg:.4f}'}")
    return "\n".join(lines) + "\n"


def emit_report(report, fmt="json", path=None):
    """Render ``report`` as json, csv or markdown; write to ``path`` if given."""
    if fmt == "json":
        text = report.to_json() + "\n"
    elif fmt == "csv":
        text = _csv_text(report)
    elif fmt in ("markdown", "md"):
        text = _markdown_text(report)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def convergence_csv(study):
    vary = study["vary"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["fraction", vary, "psi_mean", "psi_std", "long_run"])
    for r in study["rows"]:
        w.writerow([repr(r["fraction"]), r[vary], repr(r["psi_mean"]), repr(r["psi_std"]),
                    repr(study["long_run"])])
    return buf.getvalue()
