"""Command-line front door.

Subcommands: solve (douglas | axb | congruence | pt | riccati), check
(range | douglas | pt-conditions), demo (ex1 | ex2 | l2), sweep. Every
invocation prints one RunReport JSON document on stdout. Exit codes:
0 solved / condition holds, 1 unsolvable / condition failed (with a full
report), 2 input error. OPEQ_TOL overrides the default tolerance; an
explicit --tol beats the environment.
"""

from __future__ import annotations

import argparse
import os
import sys

from .conditions import majorization_lambda, pt_conditions, range_inclusion, verify_solution
from .linalg import InputError
from .matio import RunReport, digest_text, parse_matrix_text, save_matrix
from .module_model import DEFAULT_GRID_N, demo
from .solvers import (
    axb_reduced_solve,
    congruence_solve,
    douglas_reduced_solve,
    pt_solve,
    riccati_geomean,
)
from .sweep import run_sweep

DEFAULT_TOL = 1e-8

SOLVE_FLAGS = {
    "douglas": ("A", "B"),
    "axb": ("A", "B", "C"),
    "congruence": ("A", "C"),
    "pt": ("H", "K"),
    "riccati": ("A", "B"),
}

CHECK_FLAGS = {
    "range": ("A", "B"),
    "douglas": ("A", "B"),
    "pt-conditions": ("H", "K"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="opeq",
        description="Solve and check operator equations (AX=B, AXB=C, AXA*=C, "
        "XHX=K, Riccati) at matrix scale, plus function-module counterexample "
        "demos and seeded property sweeps.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="solve one equation family")
    sp.add_argument("family", choices=sorted(SOLVE_FLAGS))
    for flag in ("--A", "--B", "--C", "--H", "--K"):
        sp.add_argument(flag, metavar="FILE")
    sp.add_argument("--tol", type=float)
    sp.add_argument("--out", metavar="FILE", help="also write the solution matrix here")

    cp = sub.add_parser("check", help="evaluate solvability conditions only")
    cp.add_argument("battery", choices=sorted(CHECK_FLAGS))
    for flag in ("--A", "--B", "--H", "--K"):
        cp.add_argument(flag, metavar="FILE")
    cp.add_argument("--tol", type=float)

    dp = sub.add_parser("demo", help="run a function-module counterexample")
    dp.add_argument("which", choices=("ex1", "ex2", "l2"))
    dp.add_argument("--grid", type=int, default=DEFAULT_GRID_N)

    wp = sub.add_parser("sweep", help="seeded randomized property battery")
    wp.add_argument("--seed", type=int, default=42)
    wp.add_argument("--trials", type=int, default=50)
    wp.add_argument("--max-dim", type=int, default=6, dest="max_dim")
    return p


def _resolve_tol(args) -> float:
    if getattr(args, "tol", None) is not None:
        tol = args.tol
    else:
        raw = os.environ.get("OPEQ_TOL")
        if raw is None:
            return DEFAULT_TOL
        try:
            tol = float(raw)
        except ValueError:
            raise InputError(f"OPEQ_TOL is not a number: {raw!r}") from None
    if not (0.0 < tol < 1.0):
        raise InputError(f"tolerance must lie in (0, 1), got {tol}")
    return tol


def _load_inputs(args, flags):
    mats = {}
    digests = {}
    for name in flags:
        path = getattr(args, name)
        if path is None:
            raise InputError(f"missing required --{name}")
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"{path}: {exc.strerror or exc}") from None
        digests[name] = digest_text(text)
        try:
            mats[name] = parse_matrix_text(text)
        except InputError as exc:
            raise InputError(f"{path}: {exc}") from None
    return mats, digests


def _cmd_solve(args) -> RunReport:
    tol = _resolve_tol(args)
    mats, digests = _load_inputs(args, SOLVE_FLAGS[args.family])
    command = f"solve {args.family}"
    conditions = []
    residuals = {}
    detail = {}
    solution = None

    if args.family == "douglas":
        rep = douglas_reduced_solve(mats["A"], mats["B"], tol=tol)
        conditions = rep.conditions_met
        residuals["solve"] = rep.residual
        solved = rep.solvable and rep.residual <= tol
        solution = rep.solution if solved else None
    elif args.family == "axb":
        rep = axb_reduced_solve(mats["A"], mats["B"], mats["C"], tol=tol)
        conditions = rep.conditions_met
        residuals["solve"] = rep.residual
        solved = rep.solvable and rep.residual <= tol
        solution = rep.solution if solved else None
    elif args.family == "congruence":
        rep = congruence_solve(mats["A"], mats["C"], tol=tol)
        conditions = rep.conditions_met
        residuals["solve"] = rep.residual
        solved = rep.solvable and rep.residual <= tol
        solution = rep.solution if solved else None
    elif args.family == "pt":
        rep = pt_solve(mats["H"], mats["K"], tol=tol)
        conditions = rep.conditions
        detail["h_nonsingular"] = rep.h_nonsingular
        if rep.a_min is not None:
            detail["norm_bound"] = rep.a_min
        if rep.residual is not None:
            residuals["solve"] = rep.residual
        solved = rep.solvable and rep.solution is not None
        solution = rep.solution if solved else None
        if not rep.h_nonsingular:
            detail["note"] = (
                "singular H: only the necessity conditions are evaluated, "
                "no solution is emitted"
            )
    else:
        x = riccati_geomean(mats["A"], mats["B"])
        residuals["solve"] = verify_solution("riccati", x, a=mats["A"], b=mats["B"])
        solved = residuals["solve"] <= tol
        solution = x if solved else None

    if solution is not None and args.out:
        save_matrix(args.out, solution)
    return RunReport(
        command=command,
        outcome="solved" if solved else "unsolvable",
        inputs=digests,
        residuals=residuals,
        conditions=conditions,
        solution=solution,
        detail=detail,
    )


def _cmd_check(args) -> RunReport:
    tol = _resolve_tol(args)
    mats, digests = _load_inputs(args, CHECK_FLAGS[args.battery])
    command = f"check {args.battery}"
    detail = {}
    residuals = {}

    if args.battery == "range":
        rep = range_inclusion(mats["B"], mats["A"], tol=tol)
        conditions = [rep]
        ok = rep.holds
    elif args.battery == "douglas":
        inc = range_inclusion(mats["B"], mats["A"], tol=tol)
        lam = majorization_lambda(mats["B"], mats["A"], tol=tol)
        solve = douglas_reduced_solve(mats["A"], mats["B"], tol=tol)
        conditions = [inc]
        residuals["least_squares"] = solve.residual
        detail["lambda"] = lam
        ok = inc.holds and lam is not None
    else:
        conditions = pt_conditions(mats["H"], mats["K"], tol=tol)
        ok = all(c.holds for c in conditions)

    return RunReport(
        command=command,
        outcome="solved" if ok else "unsolvable",
        inputs=digests,
        residuals=residuals,
        conditions=conditions,
        detail=detail,
    )


def _cmd_demo(args) -> RunReport:
    doc = demo(args.which, grid_n=args.grid)
    if args.which == "l2":
        ok = doc["local_solvable_everywhere"] and doc["global_majorization_fails"]
    else:
        ok = doc["conclusion_holds"]
    return RunReport(
        command=f"demo {args.which}",
        outcome="solved" if ok else "unsolvable",
        detail=doc,
    )


def _cmd_sweep(args) -> RunReport:
    doc = run_sweep(seed=args.seed, trials=args.trials, max_dim=args.max_dim)
    return RunReport(
        command="sweep",
        outcome="solved" if doc["all_pass"] else "unsolvable",
        seed=args.seed,
        detail=doc,
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "solve": _cmd_solve,
        "check": _cmd_check,
        "demo": _cmd_demo,
        "sweep": _cmd_sweep,
    }
    try:
        report = handlers[args.command](args)
    except InputError as exc:
        err = RunReport(
            command=args.command,
            outcome="error",
            detail={"message": str(exc)},
        )
        sys.stdout.write(err.emit())
        return 2
    sys.stdout.write(report.emit())
    return 0 if report.outcome == "solved" else 1


if __name__ == "__main__":
    sys.exit(main())
