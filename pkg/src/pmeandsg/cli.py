"""Command-line interface.

Exit codes: 0 success, 2 input error, 3 numeric or convergence error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from . import families
from .exact import ConvergenceError, exact_pmean
from .graph import Graph, GraphFormatError, NodeSet, read_edge_list, write_edge_list
from .metrics import UndefinedMetricError, density_report, format_p, parse_p
from .peel import best_prefix, core_decomposition, gen_peel, simple_peel

log = logging.getLogger("pmeandsg")

EXIT_INPUT = 2
EXIT_NUMERIC = 3

SWEEP_COLUMNS = ["p", "algo", "size", "edge_density", "avg_degree", "avg_squared_degree",
                 "max_degree", "min_degree", "fp", "mp", "seconds"]


def _p_json(p: float):
    return format_p(p) if math.isinf(p) else p


def _labels(g: Graph, s: NodeSet) -> list[str]:
    return [g.labels[v] for v in s]


def _echo(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k == "func":
            continue
        if isinstance(v, float):
            v = _p_json(v)
        elif isinstance(v, list):
            v = [_p_json(x) if isinstance(x, float) else x for x in v]
        out[k] = v
    return out


def _seconds(args, t0: float):
    return None if args.no_timing else round(time.perf_counter() - t0, 6)


def _row(p: float, algo: str, g: Graph, s: NodeSet, seconds) -> dict:
    rep = density_report(g, s, p)
    return {
        "p": format_p(p), "algo": algo, "size": rep.set_size,
        "edge_density": rep.edge_density, "avg_degree": rep.avg_degree,
        "avg_squared_degree": rep.avg_squared_degree, "max_degree": rep.max_degree,
        "min_degree": rep.min_degree, "fp": rep.avg_pth_power_degree, "mp": rep.m_p,
        "seconds": seconds,
    }


def _write_csv(rows: list[dict], out):
    w = csv.DictWriter(out, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: "" if r[k] is None else r[k] for k in SWEEP_COLUMNS})


def _emit(args, payload):
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2, allow_nan=False) + "\n"
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)


def _load(path) -> Graph:
    try:
        return read_edge_list(path)
    except GraphFormatError as e:
        raise GraphFormatError(f"{path}: {e}") from None


def cmd_peel(args) -> int:
    g = _load(args.input)
    p = args.p
    t0 = time.perf_counter()
    trace = gen_peel(g, p) if args.algo == "gen" else simple_peel(g, p)
    secs = _seconds(args, t0)
    best = trace.best_set
    if args.format == "csv":
        buf = io.StringIO()
        _write_csv([_row(p, args.algo, g, best, secs)], buf)
        _emit(args, buf.getvalue())
        return 0
    report = {
        "command": "peel", "p": _p_json(p), "algo": args.algo,
        "set_labels": _labels(g, best),
        "metrics": density_report(g, best, p).as_dict(),
        "objective": trace.best_value,
        "best_index": trace.best_index,
        "order_length": len(trace.order),
        "seconds": secs,
        "config_echo": _echo(args),
    }
    if g.n <= args.trace_limit:
        report["trace"] = {
            "order_labels": [g.labels[v] for v in trace.order.tolist()],
            "prefix_objective": [None if math.isnan(x) else x for x in trace.prefix_objective.tolist()],
        }
    if args.algo == "simple" and p == 1:
        core, k = best_prefix(trace, -math.inf)
        report["maxcore"] = {"degeneracy": int(k), "set_labels": _labels(g, core),
                             "metrics": density_report(g, core, -math.inf).as_dict()}
    _emit(args, report)
    return 0


def cmd_exact(args) -> int:
    g = _load(args.input)
    t0 = time.perf_counter()
    res = exact_pmean(g, args.p, method=args.method, tol=args.tol)
    secs = _seconds(args, t0)
    report = {
        "command": "exact", "p": _p_json(args.p), "algo": args.method,
        "set_labels": _labels(g, res.best_set),
        "metrics": density_report(g, res.best_set, args.p).as_dict(),
        "objective": res.best_fp,
        "iterations": res.iterations,
        "alpha_trace": [{"alpha": a, "yes": y, "size": k} for a, y, k in res.alpha_trace],
        "seconds": secs,
        "config_echo": _echo(args),
    }
    _emit(args, report)
    return 0


def _components(g: Graph, s: NodeSet) -> list[list[str]]:
    idx = s.to_array()
    sub = csr_matrix((g.indices * 0 + 1, g.indices, g.indptr), shape=(g.n, g.n))[idx][:, idx]
    _, comp = connected_components(sub, directed=False)
    groups: dict[int, list[str]] = {}
    for v, c in zip(idx.tolist(), comp.tolist()):
        groups.setdefault(c, []).append(g.labels[v])
    return sorted(groups.values(), key=lambda c: (-len(c), c))


def cmd_kcore(args) -> int:
    g = _load(args.input)
    t0 = time.perf_counter()
    dec = core_decomposition(g)
    secs = _seconds(args, t0)
    report = {
        "command": "kcore", "p": "-inf", "algo": "core",
        "set_labels": _labels(g, dec.maxcore_set),
        "degeneracy": dec.degeneracy,
        "components": _components(g, dec.maxcore_set),
        "metrics": density_report(g, dec.maxcore_set, -math.inf).as_dict(),
        "seconds": secs,
        "config_echo": _echo(args),
    }
    if g.n <= args.trace_limit:
        report["core_number"] = {g.labels[v]: int(k) for v, k in enumerate(dec.core_number)}
    _emit(args, report)
    return 0


def _read_nodes(g: Graph, path) -> NodeSet:
    s = NodeSet(g.n)
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            lab = line.strip()
            if not lab or lab[0] in "#%":
                continue
            if lab not in g.label_index:
                raise GraphFormatError(f"unknown node label {lab!r}", lineno)
            s.add(g.label_index[lab])
    if not s.size:
        raise GraphFormatError("node-set file is empty")
    return s


def cmd_stats(args) -> int:
    g = _load(args.input)
    s = _read_nodes(g, args.nodes) if args.nodes else NodeSet.full(g.n)
    report = {
        "command": "stats", "p": _p_json(args.p), "algo": None,
        "set_labels": _labels(g, s),
        "metrics": density_report(g, s, args.p).as_dict(),
        "graph": {"n": g.n, "m": g.m, "self_loops_dropped": g.info.self_loops,
                  "duplicates_collapsed": g.info.duplicates},
        "seconds": None,
        "config_echo": _echo(args),
    }
    _emit(args, report)
    return 0


def _family_spec(args) -> families.FamilySpec:
    need = {
        "clique": ("size",), "bipartite": ("a", "b"), "lemma4": ("d", "D"),
        "banded": ("n", "k"), "tightness": ("p", "k", "n"), "er": ("n", "prob"),
    }[args.family]
    missing = [f"--{k}" for k in need if getattr(args, k) is None]
    if missing:
        raise ValueError(f"family {args.family} needs {' '.join(missing)}")
    if args.family == "clique":
        return families.Clique(args.size)
    if args.family == "bipartite":
        return families.CompleteBipartite(args.a, args.b)
    if args.family == "lemma4":
        return families.Lemma4(args.d, args.D)
    if args.family == "banded":
        return families.Banded(args.n, args.k)
    if args.family == "tightness":
        return families.Tightness(args.p, args.k, args.n, args.copies)
    return families.ErdosRenyi(args.n, args.prob, args.seed)


def cmd_generate(args) -> int:
    g = families.generate(_family_spec(args))
    buf = io.StringIO()
    buf.write(f"# {args.family} n={g.n} m={g.m}\n")
    write_edge_list(g, buf)
    _emit(args, buf.getvalue())
    return 0


def _sweep_one(g: Graph, p: float, algo: str, simple_trace, no_timing: bool) -> dict:
    t0 = time.perf_counter()
    if p == -math.inf:
        s, _ = best_prefix(simple_trace or simple_peel(g, 1.0), p)
        label = "maxcore"
    elif algo == "simple":
        s, _ = best_prefix(simple_trace, p)
        label = algo
    else:
        s = gen_peel(g, p).best_set
        label = algo
    secs = None if no_timing else round(time.perf_counter() - t0, 6)
    return _row(p, label, g, s, secs)


def cmd_sweep(args) -> int:
    g = _load(args.input)
    ps = args.p_list
    if not ps:
        raise ValueError("--p-list must not be empty")
    simple_trace = simple_peel(g, 1.0) if args.algo == "simple" or -math.inf in ps else None
    threads = args.threads or os.cpu_count() or 1
    with ThreadPoolExecutor(max_workers=threads) as pool:
        rows = list(pool.map(lambda p: _sweep_one(g, p, args.algo, simple_trace, args.no_timing), ps))
    if args.format == "json":
        _emit(args, {"command": "sweep", "rows": rows,
                     "config_echo": _echo(args)})
    else:
        buf = io.StringIO()
        _write_csv(rows, buf)
        _emit(args, buf.getvalue())
    return 0


def _p_list(text: str) -> list[float]:
    return [parse_p(t) for t in text.replace(";", ",").split(",") if t.strip()]


def _p_arg(text: str) -> float:
    try:
        return parse_p(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pmeandsg",
                                 description="Generalized-mean dense subgraph discovery.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, fmt=("json",), default_fmt="json"):
        sp.add_argument("-o", "--output", help="output file (default stdout)")
        sp.add_argument("--format", choices=fmt, default=default_fmt)
        sp.add_argument("--no-timing", action="store_true",
                        help="omit wall-clock seconds (byte-stable output)")
        sp.add_argument("--trace-limit", type=int, default=10_000,
                        help="emit per-node detail only up to this many nodes")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--threads", type=int, default=None)

    sp = sub.add_parser("peel", help="greedy peeling at one p")
    sp.add_argument("input")
    sp.add_argument("--p", type=_p_arg, default=1.0)
    sp.add_argument("--algo", choices=("gen", "simple"), default="gen")
    common(sp, ("json", "csv"))
    sp.set_defaults(func=cmd_peel)

    sp = sub.add_parser("exact", help="exact solve for p >= 1")
    sp.add_argument("input")
    sp.add_argument("--p", type=_p_arg, default=1.0)
    sp.add_argument("--method", choices=("submodular", "bruteforce"), default="submodular")
    sp.add_argument("--tol", type=_positive_float, default=None)
    common(sp)
    sp.set_defaults(func=cmd_exact)

    sp = sub.add_parser("kcore", help="core decomposition and maxcore")
    sp.add_argument("input")
    common(sp)
    sp.set_defaults(func=cmd_kcore)

    sp = sub.add_parser("stats", help="density report for a node set")
    sp.add_argument("input")
    sp.add_argument("--nodes", help="file with one node label per line")
    sp.add_argument("--p", type=_p_arg, default=1.0)
    common(sp)
    sp.set_defaults(func=cmd_stats)

    sp = sub.add_parser("generate", help="write a generated family as an edge list")
    sp.add_argument("--family", required=True,
                    choices=("clique", "bipartite", "lemma4", "banded", "tightness", "er"))
    for name in ("size", "a", "b", "d", "D", "n", "k", "copies"):
        sp.add_argument(f"--{name}", type=int)
    sp.add_argument("--p", type=float)
    sp.add_argument("--prob", type=float)
    common(sp, ("edgelist",), "edgelist")
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("sweep", help="CSV of best-set metrics over a list of p")
    sp.add_argument("input")
    sp.add_argument("--p-list", type=_p_list, default=_p_list("-inf,0.5,1,1.05,1.5,2"))
    sp.add_argument("--algo", choices=("gen", "simple"), default="gen")
    common(sp, ("csv", "json"), "csv")
    sp.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UndefinedMetricError, ConvergenceError, FloatingPointError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except (GraphFormatError, OSError, ValueError, IndexError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
