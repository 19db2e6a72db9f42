"""Command-line interface: ``gompertz-kl {eval,kl,sample,fit,decompose,check}``.

Exit codes: 0 success, 2 input/validation error, 3 numerical-consistency
failure. Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import Iterable, Sequence

import numpy as np

from . import checks
from .errors import ConvergenceError, DegenerateDataError, DomainError
from .fit import mle_fit
from .gompertz import GompertzParams, Sampler, cdf, log_pdf, pdf
from .growth_decomp import decompose
from .kl_divergence import kl_closed_form, kl_numeric

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3
DEFAULT_SEED = 42
ORACLE_TOLERANCE = 1e-6


class InputError(Exception):
    """Bad user input; reported with exit code 2."""


def _seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("GOMPERTZ_SEED")
    if env is None:
        return DEFAULT_SEED
    try:
        seed = int(env)
    except ValueError:
        raise InputError(f"GOMPERTZ_SEED must be an integer, got {env!r}") from None
    if not 0 <= seed < 2**64:
        raise InputError(f"GOMPERTZ_SEED must be a 64-bit unsigned integer, got {seed}")
    return seed


def _json_number(v):
    # JSON has no inf/nan; those become null
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def _emit_json(obj, out) -> None:
    if isinstance(obj, list):
        obj = [{k: _json_number(v) for k, v in row.items()} if isinstance(row, dict)
               else _json_number(row) for row in obj]
    elif isinstance(obj, dict):
        obj = {k: _json_number(v) for k, v in obj.items()}
    # float repr is the shortest string that round-trips (at most 17 digits)
    out.write(json.dumps(obj, indent=2, allow_nan=False))
    out.write("\n")


def _fmt_csv(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return format(v, ".12g")
    return str(v)


def _emit_table(rows: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        _emit_json(rows, out)
        return
    writer = csv.writer(out, lineterminator="\n")
    if rows:
        writer.writerow(rows[0].keys())
    for row in rows:
        writer.writerow(_fmt_csv(v) for v in row.values())


def _params(b: float, q: float) -> GompertzParams:
    try:
        return GompertzParams(b, q)
    except DomainError as exc:
        raise InputError(str(exc)) from None


def _grid(args) -> np.ndarray:
    if args.x is not None:
        xs = np.asarray(args.x, dtype=float)
    else:
        start, stop = args.x_range
        if args.steps < 1:
            raise InputError(f"--steps must be >= 1, got {args.steps}")
        xs = np.linspace(start, stop, args.steps)
    bad = ~np.isfinite(xs) | (xs < 0)
    if np.any(bad):
        raise InputError(f"x must be finite and >= 0, got {float(xs[bad][0])!r}")
    return xs


# -- commands ----------------------------------------------------------------


def cmd_eval(args, out) -> int:
    p = _params(args.b, args.q)
    xs = _grid(args)
    rows = [
        {"x": float(x), "pdf": float(f), "log_pdf": float(lf), "cdf": float(c)}
        for x, f, lf, c in zip(xs, pdf(p, xs), log_pdf(p, xs), cdf(p, xs))
    ]
    _emit_table(rows, args.format, out)
    return EXIT_OK


def cmd_kl(args, out) -> int:
    p1 = _params(args.b1, args.q1)
    p2 = _params(args.b2, args.q2)
    breakdown = kl_closed_form(p1, p2)
    result = breakdown.as_dict()
    status = EXIT_OK
    if args.oracle:
        numeric = kl_numeric(p1, p2, tol=args.tol)
        delta = abs(numeric.value - breakdown.total)
        result.update(oracle=numeric.value, oracle_error_estimate=numeric.error_estimate,
                      oracle_evaluations=numeric.evaluations, abs_diff=delta)
        if not delta <= ORACLE_TOLERANCE:
            print(f"closed form and quadrature disagree by {delta:.3e} "
                  f"(> {ORACLE_TOLERANCE:g})", file=sys.stderr)
            status = EXIT_NUMERIC
    if args.format == "json":
        _emit_json(result, out)
    else:
        _emit_table([result], "csv", out)
    return status


def cmd_sample(args, out) -> int:
    if args.n < 1:
        raise InputError(f"--n must be >= 1, got {args.n}")
    p = _params(args.b, args.q)
    values = Sampler(p, seed=_seed(args.seed)).sample(args.n)
    if args.format == "json":
        _emit_json([float(v) for v in values], out)
    else:
        for v in values:
            out.write(format(float(v), ".12g") + "\n")
    return EXIT_OK


def _parse_numbers(lines: Iterable[str], fmt: str) -> list[float]:
    values: list[float] = []
    if fmt == "csv":
        for lineno, row in enumerate(csv.reader(lines), start=1):
            if not row or row[0].lstrip().startswith("#"):
                continue
            if len(row) != 1:
                raise InputError(f"line {lineno}: expected a single column, got {len(row)}")
            try:
                values.append(float(row[0]))
            except ValueError:
                if lineno == 1:
                    continue  # header
                raise InputError(f"line {lineno}: not a number: {row[0]!r}") from None
    else:
        for lineno, line in enumerate(lines, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                values.append(float(text))
            except ValueError:
                raise InputError(f"line {lineno}: not a number: {text!r}") from None
    for lineno, v in enumerate(values, start=1):
        if not math.isfinite(v) or v < 0:
            raise InputError(f"observation {lineno}: must be finite and >= 0, got {v!r}")
    return values


def cmd_fit(args, out) -> int:
    if args.path == "-":
        lines = sys.stdin.read().splitlines()
    else:
        try:
            with open(args.path, encoding="utf-8") as fh:
                lines = fh.read().splitlines()
        except OSError as exc:
            raise InputError(f"cannot read {args.path}: {exc.strerror}") from None
    data = _parse_numbers(lines, args.format)
    if not data:
        raise InputError(f"{args.path}: no observations")
    try:
        result = mle_fit(data)
    except (DomainError, DegenerateDataError) as exc:
        raise InputError(str(exc)) from None
    out.write(json.dumps(result.as_dict(), indent=2) + "\n")
    return EXIT_OK


def cmd_decompose(args, out) -> int:
    p = _params(args.b, args.q)
    xs = _grid(args)
    rows = [pt.as_dict() for pt in decompose(p, xs)]
    _emit_table(rows, args.format, out)
    return EXIT_OK


def cmd_check(args, out) -> int:
    def report(r: checks.CheckResult) -> None:
        out.write(checks.format_result(r) + "\n")
        out.flush()

    results = checks.run_all(perturb=args.perturb, report=report)
    failed = [r for r in results if not r.passed]
    out.write(f"{len(results) - len(failed)}/{len(results)} checks passed\n")
    return EXIT_OK if not failed else EXIT_NUMERIC


# -- parser ------------------------------------------------------------------


def _add_grid_args(sub: argparse.ArgumentParser, *, allow_list: bool) -> None:
    if allow_list:
        group = sub.add_mutually_exclusive_group(required=True)
        group.add_argument("--x", type=float, nargs="+", help="evaluation points")
        group.add_argument("--x-range", type=float, nargs=2, metavar=("START", "STOP"))
    else:
        sub.add_argument("--x-range", type=float, nargs=2, metavar=("START", "STOP"),
                         required=True)
        sub.set_defaults(x=None)
    sub.add_argument("--steps", type=int, default=101, help="points in --x-range (default 101)")


def _add_format(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gompertz-kl",
        description="Gompertz distribution, extreme value bridges and closed-form KL divergence.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("eval", help="pdf, log-pdf and cdf on a grid")
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--q", type=float, required=True)
    _add_grid_args(p, allow_list=True)
    _add_format(p)
    p.set_defaults(func=cmd_eval)

    p = subs.add_parser("kl", help="closed-form KL(F1 || F2), term by term")
    for name in ("b1", "q1", "b2", "q2"):
        p.add_argument(f"--{name}", type=float, required=True)
    p.add_argument("--oracle", action="store_true", help="also integrate numerically and compare")
    p.add_argument("--tol", type=float, default=1e-10, help="quadrature tolerance for --oracle")
    _add_format(p)
    p.set_defaults(func=cmd_kl)

    p = subs.add_parser("sample", help="seeded inverse-CDF draws")
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=None,
                   help=f"RNG seed (default: $GOMPERTZ_SEED or {DEFAULT_SEED})")
    _add_format(p)
    p.set_defaults(func=cmd_sample)

    p = subs.add_parser("fit", help="profile maximum-likelihood fit of (b, q)")
    p.add_argument("path", help="data file, one non-negative number per line; '-' for stdin")
    p.add_argument("--format", choices=("text", "csv"), default="text", help="input format")
    p.set_defaults(func=cmd_fit)

    p = subs.add_parser("decompose", help="growth / decline propensities on a grid")
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--q", type=float, required=True)
    _add_grid_args(p, allow_list=False)
    _add_format(p)
    p.set_defaults(func=cmd_decompose)

    p = subs.add_parser("check", help="run the self-verification suite")
    p.add_argument("--perturb", type=float, default=0.0, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: Sequence[str] | None = None, out: io.TextIOBase | None = None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConvergenceError, OverflowError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
