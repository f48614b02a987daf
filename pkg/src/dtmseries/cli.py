"""Command-line front end.

Subcommands:

    ops pow --m M [--naive] [--count] [--in FILE] [--out FILE]
    ops exp [--naive] [--count] [--in FILE] [--out FILE]
    solve --eq TEXT --ic LIST --order N [--out FILE]
    bratu --lambda L --order N --grid P --branch lower|upper
          [--out-csv FILE] [--out-json FILE]
    bench --op pow|exp --order N [--m M] [--reps R]

Data goes to standard output (or the --out file); diagnostics and
summaries go to standard error. Floating-point output uses shortest
round-trip formatting, so identical invocations produce byte-identical
data files. Exit codes: 0 success, 2 malformed input or usage, 3 domain
error, 4 requested solution branch does not exist.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .bratu import AnalyticBratu, BratuProblem, shoot
from .errors import (
    BranchNotFoundError,
    DomainError,
    EquationError,
    NonFiniteCoefficientError,
    SeriesFormatError,
)
from .lang import lower, parse, run
from .powers import OpCount, exp_naive, exp_series, pow_int, pow_naive
from .series import Series, dump_series, evaluate, load_series

__all__ = ["main", "main_entry", "build_parser"]

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DOMAIN = 3
EXIT_NO_SOLUTION = 4

BRATU_LAMBDA_MIN = 1e-3
BRATU_LAMBDA_MAX = 10.0


class _UsageError(Exception):
    """Invalid flag combination or value; maps to exit code 2."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dtmseries",
        description="Truncated power-series engine: series operations, an "
        "ODE-to-recurrence solver, and the planar Bratu problem.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ops = sub.add_parser("ops", help="apply a series operation to a series file")
    p_ops.add_argument("op", choices=("pow", "exp"))
    p_ops.add_argument("--m", type=int, default=None, help="exponent (pow only)")
    p_ops.add_argument(
        "--naive", action="store_true", help="use the iterative oracle path"
    )
    p_ops.add_argument(
        "--count", action="store_true", help="print the multiply count to stderr"
    )
    p_ops.add_argument("--in", dest="infile", metavar="FILE", default=None,
                       help="series file (JSON or CSV); default: stdin")
    p_ops.add_argument("--out", dest="outfile", metavar="FILE", default=None,
                       help="output series file; default: stdout")
    p_ops.set_defaults(func=_cmd_ops)

    p_solve = sub.add_parser("solve", help="solve an explicit ODE for its coefficients")
    p_solve.add_argument("--eq", required=True, help='equation, e.g. "D(u,1) = u"')
    p_solve.add_argument("--ic", required=True,
                         help="comma-separated initial coefficients u0,...,u_{m-1}")
    p_solve.add_argument("--order", required=True, type=int, help="truncation order")
    p_solve.add_argument("--out", dest="outfile", metavar="FILE", default=None)
    p_solve.set_defaults(func=_cmd_solve)

    p_bratu = sub.add_parser("bratu", help="solve the planar Bratu problem")
    p_bratu.add_argument("--lambda", dest="lam", required=True, type=float)
    p_bratu.add_argument("--order", required=True, type=int)
    p_bratu.add_argument("--grid", required=True, type=int,
                         help="number of comparison grid points")
    p_bratu.add_argument("--branch", required=True, choices=("lower", "upper"))
    p_bratu.add_argument("--out-csv", dest="out_csv", metavar="FILE", default=None,
                         help="comparison CSV; default: stdout")
    p_bratu.add_argument("--out-json", dest="out_json", metavar="FILE", default=None,
                         help="summary JSON; default: stderr")
    p_bratu.set_defaults(func=_cmd_bratu)

    p_bench = sub.add_parser("bench", help="compare recurrence vs naive operation cost")
    p_bench.add_argument("--op", required=True, choices=("pow", "exp"))
    p_bench.add_argument("--order", required=True, type=int)
    p_bench.add_argument("--m", type=int, default=8, help="exponent (pow only)")
    p_bench.add_argument("--reps", type=int, default=1,
                         help="timing repetitions; fastest is reported")
    p_bench.set_defaults(func=_cmd_bench)

    return parser


def _read_series(path: str | None) -> Series:
    if path is None:
        text = sys.stdin.read()
    else:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise SeriesFormatError(f"cannot read {path}: {exc}") from None
    return load_series(text)


def _write_text(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _write_series(a: Series, path: str | None) -> None:
    if path is None:
        dump_series(a, sys.stdout)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            dump_series(a, fh)


def _cmd_ops(args: argparse.Namespace) -> int:
    if args.op == "pow":
        if args.m is None:
            raise _UsageError("ops pow requires --m")
        if args.m < 0:
            raise _UsageError("--m must be a non-negative integer")
    elif args.m is not None:
        raise _UsageError("--m is only meaningful for ops pow")
    series = _read_series(args.infile)
    if args.op == "pow":
        if args.naive:
            result, count = pow_naive(series, args.m)
        else:
            result, count = pow_int(series, args.m)
    else:
        if args.naive:
            count = OpCount()
            result = exp_naive(series, count)
        else:
            result, count = exp_series(series)
    if args.count:
        print(f"multiplies: {count.multiplies}", file=sys.stderr)
    _write_series(result, args.outfile)
    return EXIT_OK


def _cmd_solve(args: argparse.Namespace) -> int:
    equation = parse(args.eq)
    m = equation.lhs_order
    try:
        initial = [float(tok) for tok in args.ic.split(",")]
    except ValueError:
        raise _UsageError(f"--ic must be a comma-separated list of numbers, got {args.ic!r}")
    if len(initial) != m:
        raise _UsageError(
            f"equation of order {m} needs {m} initial coefficients, got {len(initial)}"
        )
    if args.order < m - 1:
        raise _UsageError(f"--order must be at least {m - 1} for an order-{m} equation")
    plan = lower(equation, args.order)
    solution = run(plan, initial, args.order)
    _write_series(solution, args.outfile)
    return EXIT_OK


def _cmd_bratu(args: argparse.Namespace) -> int:
    if not (BRATU_LAMBDA_MIN <= args.lam <= BRATU_LAMBDA_MAX):
        raise _UsageError(
            f"--lambda must lie in [{BRATU_LAMBDA_MIN:g}, {BRATU_LAMBDA_MAX:g}]"
        )
    if args.order < 3:
        raise _UsageError("--order must be at least 3")
    if args.grid < 2:
        raise _UsageError("--grid must be at least 2")
    problem = BratuProblem(lam=args.lam, order=args.order)

    reference = AnalyticBratu.for_branch(problem.lam, args.branch)
    solution = shoot(problem.lam, problem.order, args.branch)

    lines = ["x,u_dtm,u_analytic,abs_err"]
    denom = args.grid - 1
    max_err = 0.0
    for i in range(args.grid):
        x = i / denom
        u_dtm = evaluate(solution.coeffs, x)
        u_ref = reference.u(x)
        err = abs(u_dtm - u_ref)
        if err > max_err:
            max_err = err
        lines.append(f"{x!r},{u_dtm!r},{u_ref!r},{err!r}")
    _write_text("\n".join(lines) + "\n", args.out_csv)

    summary = {
        "lambda": problem.lam,
        "gamma": solution.gamma,
        "theta": reference.theta,
        "residual": solution.residual,
        "max_abs_err": max_err,
        "order": problem.order,
    }
    text = json.dumps(summary) + "\n"
    if args.out_json is None:
        sys.stderr.write(text)
    else:
        _write_text(text, args.out_json)
    return EXIT_OK


def _bench_series(order: int) -> Series:
    # Fixed, well-conditioned input: nonzero constant term, decaying tail.
    return Series(1.0 / (k + 1) for k in range(order + 1))


def _time_best(fn, reps: int) -> int:
    best = None
    for _ in range(reps):
        t0 = time.perf_counter_ns()
        fn()
        dt = time.perf_counter_ns() - t0
        if best is None or dt < best:
            best = dt
    return best


def _cmd_bench(args: argparse.Namespace) -> int:
    if args.order < 0:
        raise _UsageError("--order must be non-negative")
    if args.reps < 1:
        raise _UsageError("--reps must be at least 1")
    if args.op == "exp" and args.m != 8:
        raise _UsageError("--m is only meaningful for bench --op pow")
    if args.op == "pow" and args.m < 0:
        raise _UsageError("--m must be a non-negative integer")
    series = _bench_series(args.order)
    if args.op == "pow":
        m: int | None = args.m
        count_rec = pow_int(series, m)[1].multiplies
        count_naive = pow_naive(series, m)[1].multiplies
        time_rec = _time_best(lambda: pow_int(series, m), args.reps)
        time_naive = _time_best(lambda: pow_naive(series, m), args.reps)
    else:
        m = None
        count_rec = exp_series(series)[1].multiplies
        naive_count = OpCount()
        exp_naive(series, naive_count)
        count_naive = naive_count.multiplies
        time_rec = _time_best(lambda: exp_series(series), args.reps)
        time_naive = _time_best(lambda: exp_naive(series), args.reps)
    report = {
        "op": args.op,
        "order": args.order,
        "m": m,
        "count_recurrence": count_rec,
        "count_naive": count_naive,
        "ratio": (count_naive / count_rec) if count_rec else None,
        "time_recurrence_ns": time_rec,
        "time_naive_ns": time_naive,
    }
    sys.stdout.write(json.dumps(report) + "\n")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (EquationError, SeriesFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DomainError, NonFiniteCoefficientError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except BranchNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_SOLUTION


def main_entry() -> None:
    sys.exit(main())
