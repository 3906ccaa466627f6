"""Command-line front end.

Every subcommand writes CSV (or JSON where noted) to ``--out`` or stdout.
With ``--out`` a JSON sidecar ``<out>.json`` records the configuration.
Outputs carry no timestamps, so identical arguments give identical files.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Sequence

from . import __version__
from .coords import SfuState, from_sfu, to_sfu
from .diagnostics import (
    format_cell,
    iterate_orbit,
    log_distance,
    orbit_rows,
    secant_slope,
    track_alpha_points,
    turnaround_index,
    write_csv,
    write_sidecar,
)
from .errors import Dp1Error, NoInteriorMinimum, NumericError
from .expansions import (
    invariant_curve_p_inf,
    invariant_curve_p_minf,
    u_asymptotic,
    x_asymptotic,
)
from .lewquarles import freud_init_from_moments, lq_solve, moments
from .maps import AutonomousParams, PlaneState, alpha_dp1_step, qrt_invariant
from .numerics import BigReal, Params, digits_to_bits, parse_rational

ENV_DIGITS = "DP1LAB_DIGITS"
ENV_CONTRACTIONS = "DP1LAB_NC"
DEFAULT_DIGITS = 1200
ORBIT_COLUMNS = ("n", "x", "y", "s", "f", "u")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


class ConfigError(ValueError):
    """Arguments parsed but violate an operation's preconditions."""


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _positive_rational(text: str) -> Fraction:
    value = _rational(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _rational_list(text: str) -> list[Fraction]:
    return [_rational(item) for item in text.split(",") if item.strip()]


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from exc


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, contractions: bool = False) -> None:
    p.add_argument("--r", type=_positive_rational, default=Fraction(1), help="rational r > 0")
    p.add_argument("--N", type=_positive_rational, default=Fraction(1), help="rational N > 0")
    p.add_argument("--digits", type=int, help=f"decimal digits (default ${ENV_DIGITS} or {DEFAULT_DIGITS})")
    p.add_argument("--bits", type=int, help="precision in bits; overrides --digits")
    if contractions:
        p.add_argument("--nc", type=int, help=f"contraction count (default ${ENV_CONTRACTIONS} or 800)")
    p.add_argument("--out", help="output file (default: stdout, no sidecar)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def _add_range(p: argparse.ArgumentParser, n_min: int, n_max: int) -> None:
    p.add_argument("--n-min", type=int, default=n_min)
    p.add_argument("--n-max", type=int, default=n_max)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dp1lab", description="discrete Painleve I laboratory")
    parser.add_argument("--version", action="version", version=f"dp1lab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("freud", help="Freud orbit (xi0 = 0)")
    _add_common(p, contractions=True)
    _add_range(p, -224, 225)
    p.add_argument("--method", choices=("lq", "moments"), default="lq")

    p = sub.add_parser("lq", help="Lew-Quarles orbit for one xi0")
    _add_common(p, contractions=True)
    _add_range(p, -224, 225)
    p.add_argument("--xi0", type=_rational, required=True)

    p = sub.add_parser("orbit", help="orbit from an arbitrary seed (x, y) at n-start")
    _add_common(p)
    _add_range(p, 1, 225)
    p.add_argument("--x", type=_rational, required=True)
    p.add_argument("--y", type=_rational, required=True)
    p.add_argument("--n-start", type=int, default=1)

    p = sub.add_parser("coords", help="change between (x, y, n) and (s, f, u)")
    csub = p.add_subparsers(dest="direction", required=True)
    q = csub.add_parser("to-sfu")
    _add_common(q)
    q.add_argument("--x", type=_rational, required=True)
    q.add_argument("--y", type=_rational, required=True)
    q.add_argument("--n", type=int, required=True)
    q = csub.add_parser("from-sfu")
    _add_common(q)
    q.add_argument("--s", type=_rational, required=True)
    q.add_argument("--f", type=_rational, required=True)
    q.add_argument("--u", type=_rational, required=True)

    p = sub.add_parser("series", help="invariant-curve series (JSON)")
    p.add_argument("side", choices=("pinf", "pminf"))
    p.add_argument("--order", type=int, required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--symbolic", action="store_true", help="coefficients as polynomials in gamma (default)")
    group.add_argument("--gamma", type=_positive_rational, help="substitute a rational gamma")
    p.add_argument("--out")

    p = sub.add_parser("asym", help="large-|n| expansions")
    asub = p.add_subparsers(dest="which", required=True)
    q = asub.add_parser("u")
    _add_common(q)
    _add_range(q, 50, 225)
    q.add_argument("--side", choices=("pinf", "pminf"), default="pinf")
    q.add_argument("--branch", choices=("+", "-"), default="-")
    q.add_argument("--order", type=int, default=3)
    q = asub.add_parser("x")
    _add_common(q)
    _add_range(q, 1, 225)

    p = sub.add_parser("track", help="distance of the Freud orbit to the alpha-dP1 points")
    _add_common(p, contractions=True)
    _add_range(p, -224, 225)
    p.add_argument("--side", choices=("forward", "backward"), default="forward")

    p = sub.add_parser("logdist", help="log distance of Lew-Quarles orbits to the Freud orbit")
    _add_common(p, contractions=True)
    _add_range(p, 1, 225)
    p.add_argument("--xi0-list", type=_rational_list, required=True)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("confine", help="singularity-confinement pattern from (eps, y) at n")
    _add_common(p)
    p.add_argument("--y", type=_rational, required=True)
    p.add_argument("--eps", type=_rational, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--steps", type=int, default=5)

    p = sub.add_parser("moments", help="even moments of the quartic weight")
    _add_common(p)
    p.add_argument("--max-index", type=int, default=4)

    p = sub.add_parser("qrt", help="alpha-dP1 iteration with its invariant")
    _add_common(p)
    p.add_argument("--alpha", type=_rational, required=True)
    p.add_argument("--x", type=_rational, required=True)
    p.add_argument("--y", type=_rational, required=True)
    p.add_argument("--steps", type=int, default=1000)
    return parser


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------


def _precision(args) -> int:
    if getattr(args, "bits", None) is not None:
        bits = args.bits
    else:
        digits = args.digits if getattr(args, "digits", None) is not None else _env_int(ENV_DIGITS, DEFAULT_DIGITS)
        if digits < 1:
            raise ConfigError("--digits must be positive")
        bits = digits_to_bits(digits)
    if bits < 64:
        raise ConfigError("precision must be at least 64 bits")
    return bits


def _params(args) -> Params:
    nc = getattr(args, "nc", None)
    if nc is None:
        nc = _env_int(ENV_CONTRACTIONS, 800)
    if nc < 1:
        raise ConfigError("--nc must be >= 1")
    return Params(args.r, args.N, precision_bits=_precision(args), contraction_count=nc)


def _check_range(args, lo_bound: int | None = None, hi_bound: int | None = None) -> None:
    if args.n_min > args.n_max:
        raise ConfigError("--n-min must not exceed --n-max")
    if lo_bound is not None and args.n_min < lo_bound:
        raise ConfigError(f"--n-min must be >= {lo_bound}")
    if hi_bound is not None and args.n_max > hi_bound:
        raise ConfigError(f"--n-max must be <= {hi_bound}")


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------


class Emitter:
    def __init__(self, args, argv: Sequence[str], stdout):
        self.args = args
        self.argv = list(argv)
        self.stdout = stdout

    def table(self, rows, columns, params: Params | None, extra: dict | None = None) -> None:
        rows = list(rows)
        if getattr(self.args, "format", "csv") == "json":
            payload = [{c: format_cell(row.get(c)) for c in columns} for row in rows]
            self.json(payload, params, extra)
            return
        if self.args.out:
            write_csv(self.args.out, rows, columns)
            write_sidecar(self.args.out + ".json", params, self.argv, extra)
        else:
            writer = csv.writer(self.stdout, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([format_cell(row.get(c)) for c in columns])

    def json(self, payload, params: Params | None, extra: dict | None = None) -> None:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
        if self.args.out:
            with open(self.args.out, "w", encoding="ascii") as handle:
                handle.write(text)
            write_sidecar(self.args.out + ".json", params, self.argv, extra)
        else:
            self.stdout.write(text)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _orbit_extra(params: Params, orbit, source: str) -> dict:
    return {
        "source": source,
        "contractions": params.contraction_count,
        "precision_bits": params.precision_bits,
        "events": [{"n": e.n, "kind": e.kind, "detail": e.detail} for e in orbit.events],
    }


def _freud_seed(params: Params, method: str = "lq") -> PlaneState:
    if method == "moments":
        x1, _ = freud_init_from_moments(moments(4, params))
    else:
        x1 = lq_solve(0, None, params.contraction_count, params).xi[0]
    return PlaneState(x1, BigReal(0, params.precision_bits))


def _freud_orbit(params: Params, n_min: int, n_max: int, method: str = "lq"):
    return iterate_orbit(_freud_seed(params, method), 1, n_min, n_max, params, "freud")


def cmd_freud(args, out: Emitter) -> None:
    params = _params(args)
    _check_range(args)
    if not args.n_min <= 1 <= args.n_max:
        raise ConfigError("the range must contain n = 1")
    orbit = _freud_orbit(params, args.n_min, args.n_max, args.method)
    out.table(orbit_rows(orbit), ORBIT_COLUMNS, params, _orbit_extra(params, orbit, f"freud[{args.method}]"))


def cmd_lq(args, out: Emitter) -> None:
    params = _params(args)
    _check_range(args)
    if args.xi0 < 0:
        raise ConfigError("--xi0 must be >= 0")
    if not args.n_min <= 1 <= args.n_max:
        raise ConfigError("the range must contain n = 1")
    state = lq_solve(args.xi0, None, params.contraction_count, params)
    orbit = iterate_orbit(state.seed(), 1, args.n_min, args.n_max, params, f"lq({args.xi0})")
    out.table(orbit_rows(orbit), ORBIT_COLUMNS, params, _orbit_extra(params, orbit, f"lq({args.xi0})"))


def cmd_orbit(args, out: Emitter) -> None:
    params = _params(args)
    _check_range(args)
    if not args.n_min <= args.n_start <= args.n_max:
        raise ConfigError("need n-min <= n-start <= n-max")
    seed = PlaneState(params.big(args.x), params.big(args.y))
    source = f"polar({args.x},{args.y})"
    orbit = iterate_orbit(seed, args.n_start, args.n_min, args.n_max, params, source)
    out.table(orbit_rows(orbit), ORBIT_COLUMNS, params, _orbit_extra(params, orbit, source))


def cmd_coords(args, out: Emitter) -> None:
    params = _params(args)
    if args.direction == "to-sfu":
        s, f, u = to_sfu(PlaneState(args.x, args.y), args.n, params)
        out.table([{"s": s, "f": f, "u": u}], ("s", "f", "u"), params)
    else:
        plane, alpha = from_sfu(SfuState(args.s, args.f, args.u), params)
        row = {"x": plane.x, "y": plane.y, "n": alpha * params.N}
        out.table([row], ("x", "y", "n"), params)


def cmd_series(args, out: Emitter) -> None:
    if args.order < 2:
        raise ConfigError("--order must be >= 2")
    curve = invariant_curve_p_inf if args.side == "pinf" else invariant_curve_p_minf
    s, f = curve(args.order, args.gamma)
    payload = {
        "side": args.side,
        "order": args.order,
        "gamma": "symbolic" if args.gamma is None else format_cell(args.gamma),
        "s": s.to_json(),
        "f": f.to_json(),
    }
    out.json(payload, None)


def cmd_asym(args, out: Emitter) -> None:
    params = _params(args)
    _check_range(args)
    prec = params.precision_bits
    if args.which == "x":
        if args.n_min < 1:
            raise ConfigError("asym x needs n >= 1")
        rows = [{"n": n, "x": x_asymptotic(n, params, prec)} for n in range(args.n_min, args.n_max + 1)]
        out.table(rows, ("n", "x"), params)
        return
    if args.order < 1:
        raise ConfigError("--order must be >= 1")
    if args.side == "pinf" and args.n_min < 1:
        raise ConfigError("side pinf needs n >= 1")
    if args.side == "pminf" and args.n_max > -1:
        raise ConfigError("side pminf needs n <= -1")
    series = u_asymptotic(args.side, 1 if args.branch == "+" else -1, args.order)
    if args.format == "json":
        out.json(series.to_json(), params)
        return
    rows = [{"n": n, "u": series.evaluate(n, params.gamma, prec)} for n in range(args.n_min, args.n_max + 1)]
    out.table(rows, ("n", "u"), params, {"series": series.to_json()})


def cmd_track(args, out: Emitter) -> None:
    params = _params(args)
    _check_range(args)
    if not args.n_min <= 1 <= args.n_max:
        raise ConfigError("the range must contain n = 1")
    orbit = _freud_orbit(params, args.n_min, args.n_max)
    column = "d_n" if args.side == "forward" else "D_n"
    dist = dict(track_alpha_points(orbit, args.side))
    rows = []
    for sample in orbit:
        if sample.n in dist:
            rows.append({"n": sample.n, "x": sample.x, "y": sample.y, column: dist[sample.n]})
    out.table(rows, ("n", "x", "y", column), params, _orbit_extra(params, orbit, "freud"))


def _lq_orbit_job(xi0: Fraction, params: Params, n_min: int, n_max: int):
    state = lq_solve(xi0, None, params.contraction_count, params)
    return iterate_orbit(state.seed(), 1, n_min, n_max, params, f"lq({xi0})")


def cmd_logdist(args, out: Emitter) -> None:
    params = _params(args)
    _check_range(args)
    if not args.n_min <= 1 <= args.n_max:
        raise ConfigError("the range must contain n = 1")
    if any(xi0 < 0 for xi0 in args.xi0_list):
        raise ConfigError("every xi0 must be >= 0")
    if args.workers < 1:
        raise ConfigError("--workers must be >= 1")
    xi0s = sorted(set(args.xi0_list))
    freud = _freud_orbit(params, args.n_min, args.n_max)
    jobs = [(xi0, params, args.n_min, args.n_max) for xi0 in xi0s]
    if args.workers == 1:
        orbits = [_lq_orbit_job(*job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            orbits = list(pool.map(_lq_orbit_job, *zip(*jobs)))
    rows, turnarounds = [], {}
    for xi0, orbit in zip(xi0s, orbits):
        delta = log_distance(orbit, freud)
        slopes = dict(secant_slope(delta))
        try:
            turnarounds[format_cell(xi0)] = turnaround_index(delta)
        except NoInteriorMinimum:
            turnarounds[format_cell(xi0)] = None
        for n, d in delta:
            rows.append({"xi0": xi0, "n": n, "delta": d, "slope": slopes.get(n)})
    extra = {"turnaround": turnarounds, "contractions": params.contraction_count}
    out.table(rows, ("xi0", "n", "delta", "slope"), params, extra)


def cmd_confine(args, out: Emitter) -> None:
    from .coords import confinement_signature

    params = _params(args)
    if args.eps == 0 or args.n == 0:
        raise ConfigError("need --eps != 0 and --n != 0")
    if args.steps < 1:
        raise ConfigError("--steps must be >= 1")
    records = confinement_signature(params.big(args.y), params.big(args.eps), args.n, params, args.steps)
    rows = []
    for rec in records:
        row = {"n": rec.n, "x": rec.plane.x, "y": rec.plane.y}
        if rec.sfu is not None:
            row.update(s=rec.sfu.s, f=rec.sfu.f, u=rec.sfu.u)
        rows.append(row)
    out.table(rows, ORBIT_COLUMNS, params)


def cmd_moments(args, out: Emitter) -> None:
    params = _params(args)
    if args.max_index < 4 or args.max_index % 2:
        raise ConfigError("--max-index must be even and >= 4")
    table = moments(args.max_index, params)
    rows = [{"i": i, "mu": table[i]} for i in range(0, args.max_index + 1, 2)]
    b1, b2 = freud_init_from_moments(table)
    out.table(rows, ("i", "mu"), params, {"b1_squared": b1.to_decimal(), "b2_squared": b2.to_decimal()})


def cmd_qrt(args, out: Emitter) -> None:
    params = _params(args)
    if args.steps < 0:
        raise ConfigError("--steps must be >= 0")
    ap = AutonomousParams(args.alpha, args.r)
    state = PlaneState(params.big(args.x), params.big(args.y))
    start = qrt_invariant(state, ap)
    rows = []
    for k in range(args.steps + 1):
        value = qrt_invariant(state, ap)
        drift = abs(value - start) / abs(start) if start != 0 else abs(value - start)
        rows.append({"k": k, "x": state.x, "y": state.y, "invariant": value, "rel_drift": drift})
        if k < args.steps:
            state = alpha_dp1_step(state, ap)
    out.table(rows, ("k", "x", "y", "invariant", "rel_drift"), params)


COMMANDS = {
    "freud": cmd_freud,
    "lq": cmd_lq,
    "orbit": cmd_orbit,
    "coords": cmd_coords,
    "series": cmd_series,
    "asym": cmd_asym,
    "track": cmd_track,
    "logdist": cmd_logdist,
    "confine": cmd_confine,
    "moments": cmd_moments,
    "qrt": cmd_qrt,
}


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    """Parse ``argv``, dispatch, and return the exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        COMMANDS[args.command](args, Emitter(args, argv, stdout))
    except NumericError as exc:
        stderr.write(f"dp1lab: numeric error: {exc}\n")
        return EXIT_NUMERIC
    except (ConfigError, Dp1Error, ValueError, TypeError) as exc:
        stderr.write(f"dp1lab: configuration error: {exc}\n")
        return EXIT_CONFIG
    except OSError as exc:
        stderr.write(f"dp1lab: {exc}\n")
        return EXIT_CONFIG
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
