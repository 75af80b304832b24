"""Command-line entry point: ``geomgraph <command> ...``.

Commands
--------
generate    sample an instance, write it as JSON (and optionally an edge list)
thresholds  t1, t2 and the minimum ``a`` guaranteeing recovery for given ``b``
sweep       run a JSON-configured Monte-Carlo sweep, write trial and summary CSVs
recover     cluster recovery on a block-model instance file
regime      evaluate a connectivity/isolation/recovery predicate
analyze     components, isolated vertices and degree statistics of an instance

Exit status is 0 on success, 2 for invalid arguments or parameters and 3 for
I/O failures.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import sys
from pathlib import Path

import numpy as np

from . import io
from .analysis import (
    connected_components,
    count_isolated,
    predicted_isolated_rag,
    predicted_vrg_connectivity,
    rag_connectivity_sufficient,
    vrg_union_connectivity_sufficient,
)
from .errors import DomainError, InconsistencyError
from .recovery import compute_thresholds, min_a_for_recovery, recovery_guaranteed, solve_t1, solve_t2
from .sweep import SweepConfig, format_value, make_instance, recover_instance, run_sweep, summarize, write_summary, write_trials

DEFAULT_B = [0.01, 1, 2, 3, 4, 5, 6, 7]
MODEL_ALIASES = {"vrg": "vrg", "rag": "rag", "gbm": "gbm", "gbmt": "gbmt",
                 "vrg_union": "vrg_union", "vrg-union": "vrg_union"}
SELECTORS = ("vrg", "rag-isolated", "rag-connected", "vrg-union", "gbm")

EXIT_USAGE = 2
EXIT_IO = 3


def _fmt_bool(v) -> str:
    return "true" if v else "false"


# --------------------------------------------------------------------------
# commands


def cmd_generate(args) -> int:
    model = MODEL_ALIASES[args.model]
    inst = make_instance(model, args.n, args.a, args.b, args.t, args.c, seed=args.seed,
                         absolute=args.absolute_radii)
    io.dump_instance(inst, args.out)
    if args.edges:
        io.write_edge_list(inst.graph, args.edges)
    print(f"n={inst.n} m={inst.graph.edge_count} seed={args.seed}")
    return 0


def threshold_rows(bs):
    rows = []
    for b in bs:
        if not b > 0:
            raise DomainError(f"b must be positive, got {b}")
        rows.append((b, solve_t1(b), solve_t2(b), min_a_for_recovery(b)))
    return rows


def cmd_thresholds(args) -> int:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["b", "t1", "t2", "min_a"])
    for row in threshold_rows(args.b):
        w.writerow([format_value(v) for v in row])
    text = buf.getvalue()
    sys.stdout.write(text)
    if args.csv:
        Path(args.csv).write_text(text, encoding="ascii")
    return 0


def cmd_sweep(args) -> int:
    cfg = SweepConfig.from_json(args.config)
    records = run_sweep(cfg, workers=args.workers)
    out = Path(args.out)
    summary = Path(args.summary) if args.summary else out.with_name(out.stem + "_summary.csv")
    with open(out, "w", encoding="ascii", newline="") as fh:
        write_trials(records, fh, timings=args.timings)
    with open(summary, "w", encoding="ascii", newline="") as fh:
        write_summary(summarize(records), fh)
    print(f"rows={len(records)} out={out} summary={summary}")
    return 0


def cmd_recover(args) -> int:
    inst = io.load_instance(args.instance)
    outcome = recover_instance(inst, args.mode, args.c_s, args.c_d)
    np.savetxt(args.out, outcome.partition, fmt="%d")
    print(f"components={outcome.component_count} removed_edges={outcome.removed_edges}")
    if outcome.accuracy is not None:
        print(f"accuracy={outcome.accuracy:.9g} exact={_fmt_bool(outcome.exact)}")
    if outcome.ambiguous:
        print("ambiguous=true")
    return 0


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise DomainError(f"--{name} is required for selector {args.selector}")


def cmd_regime(args) -> int:
    sel = args.selector
    if sel == "vrg":
        _need(args, "a", "b")
        print(predicted_vrg_connectivity(args.a, args.b))
    elif sel == "rag-isolated":
        _need(args, "a", "b")
        print(predicted_isolated_rag(args.t, args.a, args.b))
    elif sel == "rag-connected":
        _need(args, "a", "b")
        print("Sufficient" if rag_connectivity_sufficient(args.t, args.a, args.b) else "Inconclusive")
    elif sel == "vrg-union":
        _need(args, "a", "b", "c")
        print("Sufficient" if vrg_union_connectivity_sufficient(args.c, args.b, args.a) else "Inconclusive")
    else:
        _need(args, "a", "b")
        th = compute_thresholds(args.a, args.b)
        ok = recovery_guaranteed(args.a, args.b)
        print(f"{'Guaranteed' if ok else 'NotGuaranteed'} theta1={th.theta1:.9g} theta2={th.theta2:.9g}")
    return 0


def cmd_analyze(args) -> int:
    inst = io.load_instance(args.instance)
    g = inst.graph
    comps = connected_components(g)
    deg = g.degrees()
    largest = int(comps.sizes().max()) if g.n else 0
    print(f"model={inst.model} n={g.n} m={g.edge_count}")
    print(f"components={comps.count} largest_component={largest} connected={_fmt_bool(comps.count <= 1)}")
    print(f"isolated={count_isolated(g)}")
    if g.n:
        print(f"degree_min={int(deg.min())} degree_mean={deg.mean():.9g} degree_max={int(deg.max())}")
    return 0


# --------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    # argparse already exits with status 2 on usage errors; keep that explicit
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="geomgraph", description="Random annulus graphs and geometric block models.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="sample an instance")
    g.add_argument("--model", required=True, choices=sorted(MODEL_ALIASES))
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--a", type=float, required=True, help="outer radius (scaled unless --absolute-radii)")
    g.add_argument("--b", type=float, required=True, help="inner radius")
    g.add_argument("--c", type=float, help="short-edge radius for vrg_union")
    g.add_argument("--t", type=int, default=1, help="sphere dimension for rag/gbmt")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--absolute-radii", action="store_true", help="take a, b, c as absolute radii")
    g.add_argument("--out", default="instance.json")
    g.add_argument("--edges", help="also write an edge-list file")
    g.set_defaults(func=cmd_generate)

    t = sub.add_parser("thresholds", help="recovery thresholds per b")
    t.add_argument("--b", type=float, nargs="+", default=DEFAULT_B)
    t.add_argument("--csv", help="also write the table to this file")
    t.set_defaults(func=cmd_thresholds)

    s = sub.add_parser("sweep", help="Monte-Carlo sweep from a JSON config")
    s.add_argument("config")
    s.add_argument("--out", default="sweep.csv")
    s.add_argument("--summary", help="summary CSV path (default: <out>_summary.csv)")
    s.add_argument("--workers", type=int, help="override the config's worker count")
    s.add_argument("--timings", action="store_true", help="add a wall_time_ms column (not byte-stable)")
    s.set_defaults(func=cmd_sweep)

    r = sub.add_parser("recover", help="recover clusters of a block-model instance")
    r.add_argument("--instance", required=True)
    r.add_argument("--mode", choices=("triangle", "with-locations"), default="triangle")
    r.add_argument("--out", default="labels.txt")
    r.add_argument("--c-s", type=float, default=1.0, help="S^t upper-threshold multiplier")
    r.add_argument("--c-d", type=float, default=1.0, help="S^t lower-threshold multiplier")
    r.set_defaults(func=cmd_recover)

    q = sub.add_parser("regime", help="evaluate a regime predicate")
    q.add_argument("selector", choices=SELECTORS)
    q.add_argument("--a", type=float)
    q.add_argument("--b", type=float)
    q.add_argument("--c", type=float)
    q.add_argument("--t", type=int, default=1)
    q.set_defaults(func=cmd_regime)

    z = sub.add_parser("analyze", help="structure of an instance file")
    z.add_argument("--instance", required=True)
    z.set_defaults(func=cmd_analyze)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "workers", None) is not None and args.workers < 1:
        print("error: --workers must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except InconsistencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
