"""Command line interface: ``structrank <command> ...``.

Exit status is 0 on success, 2 when ``rank`` had per-pair failures and 1
on any fatal error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .embedding import fixed_embedding, load_embedding, random_embedding
from .evaluator import EvalParams, evaluate
from .exceptions import StructRankError
from .features import BATTERY, KERNELS, betweenness, extended_battery, load_features
from .graph import compute_stats, load_edge_list, save_edge_list
from .report import convergence_csv, convergence_study, emit_report, rank
from .synthetic import SyntheticSpec, export_labels, generate

log = logging.getLogger("structrank")


def _write(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _graph_args(p, positional=False):
    if positional:
        p.add_argument("graph", help="edge list file")
    else:
        p.add_argument("--graph", required=True, help="edge list file")
    p.add_argument("--directed", action="store_true",
                   help="read edges as directed (features use the undirected projection)")
    p.add_argument("--delimiter", default="auto", help="auto, space, tab, comma or a character")


def _eval_args(p):
    p.add_argument("--clusters", type=int, default=None, help="k-means clusters (default round(sqrt(n)))")
    p.add_argument("--pairs", type=int, default=None, help="pair budget (default min(1e5, n^2/s))")
    p.add_argument("--within-frac", type=float, default=0.5)
    p.add_argument("--scaler", choices=["standard", "minmax"], default="standard")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=3)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-iter", type=int, default=200)
    p.add_argument("--gradient", choices=["central", "analytic"], default="central")


def _params(args):
    return EvalParams(s=args.clusters, p=args.within_frac, c=args.pairs, scaler=args.scaler,
                      seed=args.seed, tol=args.tol, max_iter=args.max_iter,
                      restarts=args.restarts, gradient=args.gradient)


def _load_graph(args):
    return load_edge_list(args.graph, directed=args.directed, delimiter=args.delimiter)


def _features(args, g):
    if getattr(args, "features", None):
        return load_features(args.features, g)
    return extended_battery(g, getattr(args, "feature_name", None) or BATTERY)


def cmd_stats(args):
    g = _load_graph(args)
    stats = compute_stats(g).to_dict()
    stats["ingest"] = {
        "self_loops_dropped": g.report.self_loops_dropped,
        "duplicates_dropped": g.report.duplicates_dropped,
        "weighted": g.report.weighted,
        "weights_used_by_features": False,
    }
    _write(json.dumps(stats, indent=2) + "\n", args.out)
    return 0


def cmd_features(args):
    g = _load_graph(args)
    names = args.feature or list(BATTERY)
    fm = extended_battery(g, names)
    if args.betweenness_pivots and "betweenness" in names:
        values = fm.values.copy()
        values[:, names.index("betweenness")] = betweenness(g, args.betweenness_pivots, args.seed)
        fm = type(fm)(values, fm.names, fm.node_ids)
        log.warning("betweenness approximated from %d pivots", args.betweenness_pivots)
    fm.to_csv(args.out)
    return 0


def cmd_baseline(args):
    g = _load_graph(args)
    if args.kind == "random":
        emb = random_embedding(g, args.dims, seed=args.seed)
    else:
        fm = load_features(args.features, g) if args.features else extended_battery(g, [args.feature])
        emb = fixed_embedding(g, fm.column(args.feature), args.dims, args.target_dim, seed=args.seed)
    emb.to_csv(args.out)
    return 0


def cmd_synth(args):
    spec = SyntheticSpec(args.nw, args.ns, args.nds, args.kw1, args.kw2, args.ks1, args.ks2,
                         args.kds1, seed=args.seed)
    rg = generate(spec)
    save_edge_list(rg.graph, args.out_graph)
    if args.out_labels:
        export_labels(rg, args.out_labels)
    log.info("%d nodes, %d edges (%d joining edges)", rg.graph.n_nodes, rg.graph.n_edges, rg.join_edges)
    return 0


def cmd_evaluate(args):
    g = _load_graph(args)
    fm = _features(args, g)
    if args.feature_name:
        fm = fm.select(args.feature_name)
    emb = load_embedding(args.embedding, g)
    res = evaluate(g, fm, emb, _params(args)).to_dict()
    res["features"] = list(fm.names)
    res["graph"] = {"directed": g.directed, "projected_to_undirected": g.directed}
    _write(json.dumps(res, indent=2) + "\n", args.out)
    return 0


def _embedding_specs(values, g):
    out = {}
    for v in values:
        name, sep, path = v.partition("=")
        if not sep:
            name, path = Path(v).stem, v
        out[name] = load_embedding(path, g, name=name)
    return out


def cmd_rank(args):
    g = _load_graph(args)
    fm = _features(args, g)
    embeddings = _embedding_specs(args.embedding, g)
    report = rank(g, fm, embeddings, _params(args), feature_names=args.feature_name,
                  joint=args.joint, workers=args.workers)
    _write(emit_report(report, args.format), args.out)
    return 2 if report.failures else 0


def cmd_converge(args):
    g = _load_graph(args)
    fm = _features(args, g).select(args.feature_name or ["degree"])
    emb = load_embedding(args.embedding, g)
    grid = [float(x) for x in args.grid.split(",")]
    study = convergence_study(g, fm, emb, args.vary, grid, args.repeats, _params(args))
    text = convergence_csv(study) if args.format == "csv" else json.dumps(study, indent=2) + "\n"
    _write(text, args.out)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="structrank", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", parents=[common], help="basic graph statistics as JSON")
    _graph_args(p, positional=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("features", parents=[common], help="compute the node feature battery")
    _graph_args(p, positional=True)
    p.add_argument("--out", required=True)
    p.add_argument("--feature", action="append", choices=sorted(KERNELS),
                   help="restrict to these features (repeatable)")
    p.add_argument("--betweenness-pivots", type=int, default=None,
                   help="approximate betweenness from this many source nodes")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("baseline", parents=[common], help="write a fixed or random baseline embedding")
    p.add_argument("kind", choices=["fixed", "random"])
    _graph_args(p)
    p.add_argument("--dims", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--feature", default="degree", help="feature copied by the fixed baseline")
    p.add_argument("--features", default=None, help="feature CSV to take the column from")
    p.add_argument("--target-dim", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("synth", parents=[common], help="generate the Web/Star/dStar benchmark graph")
    for flag, default in [("--nw", 200), ("--ns", 200), ("--nds", 200), ("--kw1", 5), ("--kw2", 10),
                          ("--ks1", 5), ("--ks2", 10), ("--kds1", 5), ("--seed", 0)]:
        p.add_argument(flag, type=int, default=default)
    p.add_argument("--out-graph", required=True)
    p.add_argument("--out-labels", default=None)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("evaluate", parents=[common], help="score one embedding against features")
    _graph_args(p)
    p.add_argument("--features", default=None, help="feature CSV (default: compute the battery)")
    p.add_argument("--embedding", required=True)
    p.add_argument("--feature-name", action="append", default=None,
                   help="feature column(s) to use jointly (default: all)")
    _eval_args(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("rank", parents=[common], help="rank embeddings over a feature battery")
    _graph_args(p)
    p.add_argument("--features", default=None)
    p.add_argument("--embedding", action="append", required=True, help="[NAME=]PATH (repeatable)")
    p.add_argument("--feature-name", action="append", default=None)
    p.add_argument("--joint", action="store_true", help="score all selected features as one block")
    p.add_argument("--format", choices=["json", "csv", "markdown"], default="json")
    p.add_argument("--workers", type=int, default=1)
    _eval_args(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("converge", parents=[common], help="psi_post versus cluster count or pair budget")
    _graph_args(p)
    p.add_argument("--features", default=None)
    p.add_argument("--embedding", required=True)
    p.add_argument("--feature-name", action="append", default=None)
    p.add_argument("--vary", choices=["clusters", "pairs"], default="clusters")
    p.add_argument("--grid", default="0.01,0.02,0.03,0.05,0.1")
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    _eval_args(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_converge)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (StructRankError, ValueError, KeyError, OSError) as exc:
        print(f"structrank: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
