"""Command line: ``randramsey {arrows,constants,folkman,mc}``.

Exit codes: 0 computed (and the property holds), 1 computed and it fails,
2 bad input, 3 search budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .arrowing import (
    DEFAULT_BUDGET, SearchBudgetExceeded, min_mono_copies, mono_copies, robust_min_mono,
)
from .audit import audit
from .constants import PreconditionError, closed_forms, folkman_bound, ledger, probabilistic_method_margin
from .graphs import GraphParseError, Pattern, named_graph, parse_graph
from .random_model import Seed, mc_threshold_sweep, parse_c_grid, sweep_csv

SCHEMA = "1"
EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class InputError(Exception):
    pass


def _load_graph(arg: str):
    """A graph file, or a named graph such as K6 when no such file exists."""
    if os.path.exists(arg):
        with open(arg, encoding="utf-8") as fh:
            try:
                return parse_graph(fh.read())
            except GraphParseError as e:
                raise InputError(f"{arg}: {e}") from None
    try:
        return named_graph(arg)
    except (KeyError, ValueError):
        raise InputError(f"{arg}: no such file or named graph") from None


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def cmd_arrows(args) -> int:
    G = _load_graph(args.graph)
    F = Pattern(_load_graph(args.pattern))
    if F.e_F == 0:
        raise InputError("pattern has no edges")
    if args.robust is not None:
        if not 0 <= args.robust <= G.m:
            raise InputError(f"--robust must lie in 0..{G.m}")
        value = robust_min_mono(G, F, args.robust, budget=args.budget)
        ok = value >= args.lam
        _emit({"schema": SCHEMA, "robust": args.robust, "min_mono": value,
               "lambda": args.lam, "lambda_ok": ok})
        return EXIT_OK if ok else EXIT_FALSE
    rep = min_mono_copies(G, F, budget=args.budget, jobs=args.jobs)
    ok = rep.min_mono >= args.lam
    out = {"schema": SCHEMA, "min_mono": rep.min_mono, "lambda": args.lam, "lambda_ok": ok,
           "explored": rep.explored}
    if args.witness:
        with open(args.witness, "w", encoding="utf-8") as fh:
            fh.write(rep.witness.to_text())
        red, blue = mono_copies(G, F, rep.witness)
        out["witness"] = {"path": args.witness, "red": red, "blue": blue}
    _emit(out)
    return EXIT_OK if ok else EXIT_FALSE


def cmd_constants(args) -> int:
    rows = ledger(args.k)
    out_rows = []
    for r in rows:
        row = r.to_json(args.k)
        if args.closed_form:
            cf = closed_forms(args.k, r.i)
            row["closed_form"] = [str(v) for v in cf]
            row["closed_form_match"] = cf == r.logs
        out_rows.append(row)
    out = {"schema": SCHEMA, "k": args.k, "rows": out_rows}
    if args.audit:
        out["audit"] = [audit(args.k, i).to_json() for i in range(1, math.comb(args.k, 2))]
    _emit(out)
    return EXIT_OK


def cmd_folkman(args) -> int:
    fb = folkman_bound(args.k)
    out = {"schema": SCHEMA, "k": args.k, "log2_n0": str(fb.log2_n0),
           "log2_nbar": str(fb.log2_nbar), "log2_clique_term": str(fb.log2_clique_term),
           "dominating": fb.dominating}
    try:
        out["probabilistic_step_holds_at_n0"] = probabilistic_method_margin(fb).holds
    except PreconditionError:
        out["probabilistic_step_holds_at_n0"] = None
    _emit(out)
    return EXIT_OK


def cmd_mc(args) -> int:
    if args.trials < 1:
        raise InputError("--trials must be positive")
    if not 0 <= args.seed < 1 << 64:
        raise InputError("--seed must be a 64-bit unsigned integer")
    F = Pattern(_load_graph(args.F))
    if F.e_F == 0:
        raise InputError("pattern has no edges")
    try:
        grid = parse_c_grid(args.C_grid)
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"bad --C-grid: {e}") from None
    if any(c != "crit" and c < 0 for c in grid):
        raise InputError("C must be nonnegative")
    rows = mc_threshold_sweep(args.n, F, grid, args.trials, Seed(args.seed), lam=args.lam,
                              budget=args.budget, jobs=args.jobs)
    if args.format == "json":
        _emit({"schema": SCHEMA, "rows": [dict(zip(
            ["C", "p", "estimate", "ci_lo", "ci_hi", "indeterminate"], r.csv_fields())) for r in rows]})
    else:
        sys.stdout.write(sweep_csv(rows))
    if any(r.valid and r.result.indeterminate for r in rows):
        return EXIT_BUDGET
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="randramsey", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("arrows", help="minimum monochromatic copies over all 2-colorings")
    a.add_argument("graph", help="edge-list file or a name like K6")
    a.add_argument("pattern", help="edge-list file or a name like K3")
    a.add_argument("--lambda", dest="lam", type=int, default=1)
    a.add_argument("--robust", type=int, default=None, metavar="H",
                   help="minimum over all deletions of H edges")
    a.add_argument("--witness", metavar="PATH", help="write an optimal coloring here")
    a.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    a.add_argument("--jobs", type=int, default=1)
    a.set_defaults(func=cmd_arrows)

    c = sub.add_parser("constants", help="exact ledger of the constant recurrences")
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--closed-form", action="store_true")
    c.add_argument("--audit", action="store_true")
    c.set_defaults(func=cmd_constants)

    f = sub.add_parser("folkman", help="log2 of the Folkman bound n0")
    f.add_argument("--k", type=int, required=True)
    f.set_defaults(func=cmd_folkman)

    m = sub.add_parser("mc", help="Monte Carlo sweep of the arrowing probability")
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--F", required=True, help="pattern file or name")
    m.add_argument("--C-grid", dest="C_grid", required=True,
                   help="comma-separated C values; 'crit' means p = 1")
    m.add_argument("--trials", type=int, required=True)
    m.add_argument("--seed", type=int, required=True)
    m.add_argument("--lambda", dest="lam", type=int, default=1)
    m.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    m.add_argument("--jobs", type=int, default=1)
    m.add_argument("--format", choices=["csv", "json"], default="csv")
    m.set_defaults(func=cmd_mc)
    return ap


def main(argv: list[str] | None = None) -> int:
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)
    args = build_parser().parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, PreconditionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except SearchBudgetExceeded as e:
        print(f"budget: {e}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
