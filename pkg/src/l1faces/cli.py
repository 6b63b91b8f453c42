"""Command-line front end.

Exit codes: 0 ok, 1 validation failure, 2 usage or parse error,
3 rank-deficient A, 4 negative lambda, 5 figure export with m != 2.
"""
from __future__ import annotations

import argparse
import sys

from . import analyze
from .decomposition import Decomposition, NegativeLambda, locate
from .figure import FigureDimensionError, figure_data
from .io import (InputError, decomposition_from_json, decomposition_to_json,
                 dumps, load_json, parse_q, parse_qlist, problem_from_json, qs,
                 qvec, solution_to_json, trace_to_csv)
from .polytope import RankDeficient
from .solution import (check_conditions, lipschitz_bound, lipschitz_samples,
                       solve, trace_path)
from .validate import ValidationConfig, run_validation

EXIT_FAIL, EXIT_USAGE, EXIT_RANK, EXIT_LAMBDA, EXIT_FIGDIM = 1, 2, 3, 4, 5


class UsageError(Exception):
    pass


def load_decomposition(path) -> tuple:
    """A problem file is analysed from scratch; a decomposition file is loaded."""
    d = load_json(path)
    if isinstance(d, dict) and "faces" in d:
        return decomposition_from_json(d), d.get("label")
    A, label = problem_from_json(d)
    return analyze(A), label


def emit(text: str, path) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def summary_table(dec: Decomposition) -> str:
    lines = [f"{'id':>3}  {'partition (+,0,-)':<22} {'dim':>3} {'F0':>3}  "
             f"{'kappa':>12}  vertices / generators"]
    for c in dec.cells:
        kappa = "-" if c.lipschitz is None else f"{c.lipschitz:.10f}"
        verts = " ".join("(" + ",".join(qvec(v)) + ")" for v in c.face.vertices)
        gens = " ".join("(" + ",".join(qvec(g)) + ")" for g in c.d_generators)
        lines.append(f"{c.id:>3}  {str(c.partition):<22} {c.face.dim:>3} "
                     f"{'yes' if c.face.in_F0 else 'no':>3}  {kappa:>12}  {verts} / {gens}")
    return "\n".join(lines) + "\n"


def _query(args, dec) -> tuple:
    if args.lam is None or args.b is None:
        raise UsageError("--lambda and --b are required")
    lam = parse_q(args.lam)
    b = parse_qlist(args.b)
    if len(b) != dec.m:
        raise UsageError(f"--b has {len(b)} entries, A has {dec.m} rows")
    if lam < 0:
        raise NegativeLambda(f"lambda must be nonnegative, got {lam}")
    return lam, b


def _point(text: str, m: int, flag: str) -> tuple:
    p = parse_qlist(text)
    if len(p) != m + 1:
        raise UsageError(f"{flag} needs lambda,b1..b{m} ({m + 1} numbers)")
    if p[0] < 0:
        raise NegativeLambda(f"lambda must be nonnegative, got {p[0]}")
    return p


def cmd_analyze(args) -> int:
    d = load_json(args.input)
    if isinstance(d, dict) and "faces" in d:
        dec, label = decomposition_from_json(d), d.get("label")
    else:
        A, label = problem_from_json(d)
        dec = analyze(A)
    emit(dumps(decomposition_to_json(dec, label)), args.output)
    (sys.stdout if args.output else sys.stderr).write(summary_table(dec))
    return 0


def cmd_eval(args) -> int:
    dec, _ = load_decomposition(args.input)
    lam, b = _query(args, dec)
    out = {"lambda": qs(lam), "b": qvec(b), **solution_to_json(solve(dec, lam, b))}
    emit(dumps(out), args.output)
    return 0


def cmd_locate(args) -> int:
    dec, _ = load_decomposition(args.input)
    lam, b = _query(args, dec)
    emit(dumps({"lambda": qs(lam), "b": qvec(b), "cells": locate(dec, lam, b)}), args.output)
    return 0


def cmd_check(args) -> int:
    dec, _ = load_decomposition(args.input)
    lam, b = _query(args, dec)
    r = check_conditions(dec, lam, b)
    out = {"lambda": qs(lam), "b": qvec(b),
           "cond31": r.cond31, "cond32": r.cond32, "cond33": r.cond33,
           "witness_x": qvec(r.witness_x),
           "witness_y": None if r.witness_y is None else qvec(r.witness_y),
           "active_J": sorted(i + 1 for i in r.active_J)}
    emit(dumps(out), args.output)
    return 0


def cmd_lipschitz(args) -> int:
    dec, _ = load_decomposition(args.input)
    cells = [{"id": c.id, "partition": str(c.partition), "in_F0": c.face.in_F0,
              "closed_form": c.lipschitz, "edge_bound": lipschitz_bound(dec, c)}
             for c in dec.cells]
    out = {"cells": cells}
    if args.trials:
        samples = lipschitz_samples(dec, args.trials, args.seed)
        out["estimate"] = max((s["ratio"] for s in samples), default=0.0)
        out["samples"] = [{"p": qvec(s["p"]), "p2": qvec(s["p2"]), "kind": s["kind"],
                           "ratio": s["ratio"]} for s in samples]
    emit(dumps(out), args.output)
    return 0


def cmd_trace(args) -> int:
    dec, _ = load_decomposition(args.input)
    if args.src is None or args.dst is None:
        raise UsageError("--from and --to are required")
    p0 = _point(args.src, dec.m, "--from")
    p1 = _point(args.dst, dec.m, "--to")
    emit(trace_to_csv(trace_path(dec, p0, p1)), args.output)
    return 0


def cmd_validate(args) -> int:
    if args.trials is None:
        args.trials = 200
    if args.trials <= 0:
        raise UsageError("--trials must be positive")
    kw = {"seed": args.seed, "trials": args.trials}
    if args.dims:
        dims = [int(t) for t in args.dims.split(",")]
        if len(dims) != 2 or dims[0] < 1 or dims[1] < dims[0]:
            raise UsageError("--dims expects m,n with 1 <= m <= n")
        kw["max_m"], kw["max_n"] = dims
    cfg = ValidationConfig.from_env(**kw)
    dec = load_decomposition(args.input)[0] if args.input else None
    report = run_validation(cfg, dec)
    emit(dumps(report), args.output)
    status = "passed" if report["passed"] else f"FAILED trials {report['failed_trials']}"
    sys.stderr.write(f"validation {status}\n")
    return 0 if report["passed"] else EXIT_FAIL


def cmd_export_fig(args) -> int:
    dec, _ = load_decomposition(args.input)
    emit(dumps(figure_data(dec)), args.output)
    return 0


COMMANDS = {
    "analyze": (cmd_analyze, "enumerate faces and cells, write decomposition JSON"),
    "eval": (cmd_eval, "exact solution set S(lambda, b)"),
    "locate": (cmd_locate, "ids of cells whose D_F contains (lambda, b)"),
    "check": (cmd_check, "uniqueness and linearity conditions at (lambda, b)"),
    "lipschitz": (cmd_lipschitz, "per-cell Lipschitz constants and sampled estimate"),
    "trace": (cmd_trace, "cells met along a parameter segment (CSV)"),
    "validate": (cmd_validate, "randomized checks against the numerical oracles"),
    "export-fig": (cmd_export_fig, "unit directions and sphere samples per cell (m = 2)"),
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="l1faces", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name, (_, helptext) in COMMANDS.items():
        p = sub.add_parser(name, help=helptext)
        p.add_argument("-i", "--input", required=name != "validate",
                       help="problem JSON or decomposition JSON")
        p.add_argument("-o", "--output", help="output file (default: stdout)")
        if name in ("eval", "locate", "check"):
            p.add_argument("--lambda", dest="lam", help="rational, e.g. 1/2")
            p.add_argument("--b", help="comma-separated rationals; use --b=-1,2 for a leading minus")
        if name == "trace":
            p.add_argument("--from", dest="src", help="lambda,b1,..,bm")
            p.add_argument("--to", dest="dst", help="lambda,b1,..,bm")
        if name in ("lipschitz", "validate"):
            p.add_argument("--seed", type=int, default=42)
            p.add_argument("--trials", type=int, default=None if name == "validate" else 0)
        if name == "validate":
            p.add_argument("--dims", help="largest m,n of random instances, e.g. 3,6")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fn = COMMANDS[args.command][0]
    try:
        return fn(args)
    except (InputError, UsageError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except RankDeficient as exc:
        sys.stderr.write(f"error: {exc} (the analysis assumes A has full row rank)\n")
        return EXIT_RANK
    except NegativeLambda as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_LAMBDA
    except FigureDimensionError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_FIGDIM


if __name__ == "__main__":
    sys.exit(main())
