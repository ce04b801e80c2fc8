"""Command-line front end.

Subcommands: ``ingest``, ``simulate``, ``depth``, ``contours`` and
``convergence``.  Exit codes: 0 success, 1 usage, 2 data error, 3 numeric
contract violation.
"""
from __future__ import annotations

import argparse
import csv
import datetime as dt
import math
import sys
from collections import defaultdict
from pathlib import Path

import numpy as np

from . import io as ppio
from .contours import contour_grid
from .depth import (InvalidIntensity, depth_from_cumulative, depth_reports, ilr_depth_hpp,
                    simplified_ilr_depth, time_rescaled_depth)
from .expr import ExpressionError, as_intensity, evaluate_constant, parse_expression
from .geometry import PointProcess, TimeDomain
from .intensity import (conditional_cumulative, convergence_experiment, default_bins,
                        function_cumulative, histogram_estimate, imi_cumulative, imi_estimate)
from .simulation import (BoundViolation, simulate_hpp, simulate_hpp_conditional, simulate_imi,
                         simulate_ipp, simulate_ipp_conditional, spawn_rngs)

EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 1, 2, 3
PERIOD_HOURS = {"day": 24.0, "week": 168.0}
MAX_BAD_FRACTION = 0.01


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _emit(text: str, path) -> None:
    out, close = _open_out(path)
    try:
        out.write(text)
    finally:
        if close:
            out.close()


def _intensity(text, var="t"):
    if text is None:
        raise UsageError(f"--intensity{'-tau' if var == 'tau' else ''} is required for this mode")
    try:
        return as_intensity(text, var)
    except ExpressionError as exc:
        raise UsageError(f"invalid expression: {exc}") from None


def _const(text: str) -> float:
    try:
        return evaluate_constant(str(text))
    except ExpressionError as exc:
        raise UsageError(f"invalid constant: {exc}") from None


# ingest -------------------------------------------------------------------

def _parse_timestamp(raw: str, period: str):
    """Return ``(period key, hours into period)`` for ISO-8601 or decimal hours."""
    raw = raw.strip()
    span = PERIOD_HOURS[period]
    try:
        hours = float(raw)
    except ValueError:
        pass
    else:
        if not math.isfinite(hours):
            raise ValueError("non-finite time")
        idx = math.floor(hours / span)
        return idx, hours - idx * span
    ts = dt.datetime.fromisoformat(raw.replace("Z", "+00:00"))
    day = ts.date()
    hours = ts.hour + ts.minute / 60 + (ts.second + ts.microsecond / 1e6) / 3600
    if period == "day":
        return day, hours
    monday = day - dt.timedelta(days=day.weekday())
    return monday, (day - monday).days * 24 + hours


def _period_id(key, period):
    if isinstance(key, dt.date):
        return key.isoformat() if period == "day" else f"week-{key.isoformat()}"
    return f"{period}-{key}"


def _fill_keys(keys, period):
    lo, hi = min(keys), max(keys)
    if isinstance(lo, dt.date):
        step = dt.timedelta(days=1 if period == "day" else 7)
        out = []
        while lo <= hi:
            out.append(lo)
            lo += step
        return out
    return list(range(lo, hi + 1))


def cmd_ingest(args) -> int:
    span = PERIOD_HOURS[args.period]
    t1 = 0.0 if args.t1 is None else _const(args.t1)
    t2 = span if args.t2 is None else _const(args.t2)
    domain = TimeDomain(t1, t2)
    groups: dict = defaultdict(lambda: defaultdict(list))
    bad: list[str] = []
    n_rows = 0
    with open(args.input, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or args.time_column not in reader.fieldnames:
            raise ppio.DataError(f"column {args.time_column!r} not found in {args.input}")
        if args.split_by and args.split_by not in reader.fieldnames:
            raise ppio.DataError(f"column {args.split_by!r} not found in {args.input}")
        for row in reader:
            n_rows += 1
            lineno = reader.line_num
            try:
                key, hours = _parse_timestamp(row[args.time_column] or "", args.period)
                if not t1 <= hours <= t2:
                    raise ValueError(f"time {hours} outside [{t1}, {t2}]")
            except (ValueError, TypeError) as exc:
                bad.append(f"line {lineno}: {exc}")
                continue
            cat = row[args.split_by] if args.split_by else ""
            groups[cat][key].append(hours)
    for msg in bad:
        print(msg, file=sys.stderr)
    if n_rows == 0:
        raise ppio.DataError("no data rows")
    if len(bad) > MAX_BAD_FRACTION * n_rows:
        raise ppio.DataError(f"{len(bad)} of {n_rows} rows could not be parsed")

    def records(by_key):
        keys = _fill_keys(list(by_key), args.period) if args.keep_empty else sorted(by_key)
        for key in keys:
            yield _period_id(key, args.period), PointProcess(domain, sorted(by_key.get(key, [])))

    if not args.split_by:
        _emit(ppio.realizations_to_string(records(groups[""])), args.output)
        return 0
    if args.output in (None, "-"):
        raise UsageError("--split-by needs --output to name the per-category files")
    base = Path(args.output)
    for cat in sorted(groups):
        safe = "".join(c if c.isalnum() or c in "-_." else "_" for c in cat) or "blank"
        path = base.with_name(f"{base.stem}_{safe}{base.suffix}")
        _emit(ppio.realizations_to_string(records(groups[cat])), path)
        print(path, file=sys.stderr)
    return 0


# simulate -----------------------------------------------------------------

def cmd_simulate(args) -> int:
    domain = TimeDomain(_const(args.t1), _const(args.t2))
    if args.n < 1:
        raise UsageError("-n must be positive")
    (rng,) = spawn_rngs(args.seed, 1)
    k = args.condition_k
    if args.family == "hpp":
        if k is not None:
            draw = lambda: simulate_hpp_conditional(k, domain, rng)
        else:
            draw = lambda: simulate_hpp(args.rate, domain, rng)
    elif args.family == "ipp":
        lam = _intensity(args.intensity)
        if args.lambda_max is None:
            raise UsageError("--lambda-max is required for ipp")
        if k is not None:
            draw = lambda: simulate_ipp_conditional(k, lam, args.lambda_max, domain, rng)
        else:
            draw = lambda: simulate_ipp(lam, args.lambda_max, domain, rng)
    else:
        lam1, lam2 = _intensity(args.intensity), _intensity(args.intensity_tau, "tau")
        if args.bound is None:
            raise UsageError("--bound is required for imi")
        if k is not None:
            raise UsageError("--condition-k is not supported for imi")
        draw = lambda: simulate_imi(lam1, lam2, args.bound, domain, rng)
    try:
        recs = [(str(i), draw()) for i in range(args.n)]
    except BoundViolation:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(ppio.realizations_to_string(recs), args.output)
    return 0


# depth --------------------------------------------------------------------

def _with_conventions(fn):
    def cond(p):
        if p.k == 0:
            return 1.0
        if p.on_boundary:
            return 0.0
        return fn(p)
    return cond


def conditional_depth_fn(mode: str, sample, args):
    """Conditional-depth callable for a ``--mode`` value."""
    n = len(sample)
    if mode == "hpp":
        return ilr_depth_hpp
    if mode == "simplified":
        return simplified_ilr_depth
    if mode == "ipp-histogram":
        cum = histogram_estimate(sample, args.bins or default_bins(n)).cumulative()
        return _with_conventions(lambda p: time_rescaled_depth(p, cum))
    if mode == "imi":
        model = imi_estimate(sample, args.bins_t, args.bins_tau)
        return _with_conventions(lambda p: depth_from_cumulative(imi_cumulative(model, p)))
    if mode == "given-intensity":
        lam1 = _intensity(args.intensity)
        if not parse_expression(args.intensity).variables and not args.intensity_tau:
            # constant rate: rescaling is affine, so the HPP depth applies exactly
            if not lam1(0.0) > 0:
                raise InvalidIntensity(f"constant intensity {args.intensity!r} is not positive")
            return ilr_depth_hpp
        if getattr(args, "intensity_tau", None):
            lam2 = _intensity(args.intensity_tau, "tau")
            return _with_conventions(
                lambda p: depth_from_cumulative(conditional_cumulative(lam1, lam2, p)))

        def given(p):
            pts = np.concatenate(([p.domain.t1], p.events, [p.domain.t2]))
            return depth_from_cumulative(function_cumulative(lam1, pts))
        return _with_conventions(given)
    raise UsageError(f"unknown mode {mode!r}")


def cmd_depth(args) -> int:
    if not args.r > 0:
        raise UsageError("--r must be positive")
    ids, sample = ppio.load_realizations(args.input)
    if not sample:
        raise ppio.DataError(f"{args.input} holds no realizations")
    cond = conditional_depth_fn(args.mode, sample, args)
    reports = depth_reports(sample, cond, r=args.r, ids=ids)
    _emit(ppio.depth_csv(reports), args.output)
    return 0


# contours -----------------------------------------------------------------

def cmd_contours(args) -> int:
    if args.k != 2:
        raise UsageError(f"contour export supports k=2 only, got k={args.k}")
    sample = []
    if args.input:
        _, sample = ppio.load_realizations(args.input)
        if not sample:
            raise ppio.DataError(f"{args.input} holds no realizations")
        domain = sample[0].domain
    else:
        if args.mode in ("ipp-histogram", "imi"):
            raise UsageError(f"mode {args.mode} needs --input")
        domain = TimeDomain(_const(args.t1), _const(args.t2))
    cond = conditional_depth_fn(args.mode, sample, args)
    grid = contour_grid(cond, domain, args.resolution)
    _emit(ppio.table_csv(ppio.CONTOUR_HEADER, grid), args.output)
    return 0


# convergence --------------------------------------------------------------

def cmd_convergence(args) -> int:
    lam = _intensity(args.intensity)
    domain = TimeDomain(_const(args.t1), _const(args.t2))
    try:
        n_grid = [int(x) for x in args.n_grid.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--n-grid must be comma-separated integers: {args.n_grid!r}") from None
    if not n_grid or min(n_grid) < 1:
        raise UsageError("--n-grid needs positive counts")
    try:
        rows = convergence_experiment(lam, domain, n_grid, rule=args.m_rule, seed=args.seed,
                                      lam_max=args.lambda_max)
    except ValueError as exc:
        if isinstance(exc, ExpressionError):
            raise UsageError(str(exc)) from None
        if "bin rule" in str(exc):
            raise UsageError(str(exc)) from None
        raise
    _emit(ppio.table_csv(ppio.CONVERGENCE_HEADER, rows), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ppdepth", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", help="group timestamps into per-period realizations")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.add_argument("--time-column", default="time")
    p.add_argument("--period", choices=sorted(PERIOD_HOURS), default="day")
    p.add_argument("--t1", default=None)
    p.add_argument("--t2", default=None)
    p.add_argument("--keep-empty", action="store_true")
    p.add_argument("--split-by", metavar="COLUMN")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("simulate", help="simulate hpp, ipp or imi realizations")
    p.add_argument("--family", choices=("hpp", "ipp", "imi"), required=True)
    p.add_argument("-n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--t1", default="0")
    p.add_argument("--t2", default="1")
    p.add_argument("--rate", type=float, default=1.0)
    p.add_argument("--intensity")
    p.add_argument("--intensity-tau")
    p.add_argument("--lambda-max", type=float)
    p.add_argument("--bound", type=float)
    p.add_argument("--condition-k", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_simulate)

    modes = ("hpp", "simplified", "ipp-histogram", "imi", "given-intensity")
    p = sub.add_parser("depth", help="rank realizations by overall depth")
    p.add_argument("input")
    p.add_argument("--mode", choices=modes, default="hpp")
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--bins", type=int)
    p.add_argument("--bins-t", type=int)
    p.add_argument("--bins-tau", type=int)
    p.add_argument("--intensity")
    p.add_argument("--intensity-tau")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_depth)

    p = sub.add_parser("contours", help="export a k=2 ternary depth grid")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--mode", choices=modes, default="hpp")
    p.add_argument("--resolution", type=int, default=60)
    p.add_argument("--input")
    p.add_argument("--t1", default="0")
    p.add_argument("--t2", default="1")
    p.add_argument("--bins", type=int)
    p.add_argument("--bins-t", type=int)
    p.add_argument("--bins-tau", type=int)
    p.add_argument("--intensity")
    p.add_argument("--intensity-tau")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_contours)

    p = sub.add_parser("convergence", help="sup-error of the histogram cumulative intensity")
    p.add_argument("--intensity", default="cos(4*t)+1")
    p.add_argument("--t1", default="0")
    p.add_argument("--t2", default="pi/2")
    p.add_argument("--n-grid", default="100,1000,10000,100000")
    p.add_argument("--m-rule", default="fourth-root")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lambda-max", type=float)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_convergence)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # usage errors and --help return their code instead of exiting the caller
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ppdepth: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidIntensity, BoundViolation, ExpressionError, RuntimeError) as exc:
        print(f"ppdepth: numeric contract violation: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ppio.DataError, ValueError, OSError) as exc:
        print(f"ppdepth: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
