"""Orbit records and the measurements taken on them.

Conventions: Euclidean norm in (x, y), natural logarithm, and the
turnaround is the first global interior minimum.
"""
from __future__ import annotations

import csv
import json
import subprocess
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from mpmath import libmp

from .coords import SfuState, to_sfu
from .errors import NoInteriorMinimum, SingularAxis
from .maps import AutonomousParams, PlaneState, alpha_fixed_point, alpha_period2, dp1_forward, dp1_inverse
from .numerics import BigReal, Number, Params

EXACT = BigReal._raw(libmp.fninf, 53)
"""log-distance sentinel for orbits that coincide exactly."""


@dataclass(frozen=True)
class OrbitSample:
    n: int
    x: Number
    y: Number
    s: Number | None = None
    f: Number | None = None
    u: Number | None = None
    precision: int | None = None
    source: str = ""

    @property
    def plane(self) -> PlaneState:
        return PlaneState(self.x, self.y)

    @property
    def sfu(self) -> SfuState | None:
        return None if self.u is None else SfuState(self.s, self.f, self.u)


def make_sample(state: PlaneState, n: int, params: Params, source: str = "") -> OrbitSample:
    prec = state.x.prec if isinstance(state.x, BigReal) else None
    if state.x == 0:
        return OrbitSample(n, state.x, state.y, precision=prec, source=source)
    s, f, u = to_sfu(state, n, params)
    return OrbitSample(n, state.x, state.y, s, f, u, prec, source)


@dataclass(frozen=True)
class OrbitEvent:
    n: int
    kind: str
    detail: str = ""


@dataclass(frozen=True)
class Orbit:
    samples: tuple
    params: Params
    events: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "_index", {s.n: s for s in self.samples})

    def __len__(self):
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    def __getitem__(self, n: int) -> OrbitSample:
        return self._index[n]

    def __contains__(self, n: int) -> bool:
        return n in self._index

    @property
    def n_values(self) -> list[int]:
        return [s.n for s in self.samples]

    def window(self, lo: int, hi: int) -> list[OrbitSample]:
        return [s for s in self.samples if lo <= s.n <= hi]


def iterate_orbit(
    seed: PlaneState, n_start: int, n_min: int, n_max: int, params: Params, source: str = ""
) -> Orbit:
    """Forward with dp1_forward, backward with dp1_inverse, from (x, y) at n_start.

    A singular axis hit at n != 0 stops that direction and is recorded.
    """
    if not n_min <= n_start <= n_max:
        raise ValueError("need n_min <= n_start <= n_max")
    events = []
    forward = [(n_start, seed)]
    state = seed
    for n in range(n_start, n_max):
        try:
            state = dp1_forward(state, n, params)
        except SingularAxis:
            events.append(OrbitEvent(n, "singular_axis", "forward step from x = 0"))
            break
        forward.append((n + 1, state))
    backward = []
    state = seed
    for n in range(n_start - 1, n_min - 1, -1):
        try:
            state = dp1_inverse(state, n, params)
        except SingularAxis:
            events.append(OrbitEvent(n, "singular_axis", "inverse step from y = 0"))
            break
        backward.append((n, state))
    pairs = list(reversed(backward)) + forward
    samples = tuple(make_sample(st, n, params, source) for n, st in pairs)
    return Orbit(samples, params, tuple(events))


def _distance(a: PlaneState, b: PlaneState) -> Number:
    dx, dy = a.x - b.x, a.y - b.y
    sq = dx * dx + dy * dy
    if isinstance(sq, BigReal):
        return sq.sqrt()
    return BigReal(sq, 256).sqrt()


def log_distance(orbit_a: Orbit, orbit_b: Orbit) -> list[tuple[int, BigReal]]:
    """(n, log ||A_n - B_n||) over the common n values; EXACT when equal."""
    out = []
    for sample in orbit_a:
        if sample.n not in orbit_b:
            continue
        d = _distance(sample.plane, orbit_b[sample.n].plane)
        out.append((sample.n, EXACT if d == 0 else d.log()))
    if not out:
        raise ValueError("orbits do not overlap")
    return out


def secant_slope(series: Sequence[tuple[int, BigReal]]) -> list[tuple[int, BigReal | None]]:
    """slope_n = delta_{n+1} - delta_n; None where either end is EXACT."""
    if len(series) < 2:
        raise ValueError("need at least two points")
    out = []
    for (n0, d0), (n1, d1) in zip(series, series[1:]):
        if n1 != n0 + 1:
            continue
        if not (d0.is_finite() and d1.is_finite()):
            out.append((n0, None))
        else:
            out.append((n0, d1 - d0))
    return out


def turnaround_index(series: Sequence[tuple[int, BigReal]]) -> int:
    """n of the global minimum of delta_n, first occurrence, interior only."""
    if len(series) < 3:
        raise NoInteriorMinimum("series too short")
    best = 0
    for k in range(1, len(series)):
        if series[k][1] < series[best][1]:
            best = k
    if best == 0 or best == len(series) - 1:
        raise NoInteriorMinimum(f"minimum at the end point n={series[best][0]}")
    return series[best][0]


def track_alpha_points(orbit: Orbit, side: str) -> list[tuple[int, BigReal]]:
    """Distance to the alpha-dP1 fixed point (forward) or period-2 pair (backward).

    alpha = n/N.  Backward, even n pairs x with Omega_+ and y with Omega_-,
    odd n the other way round.
    """
    params = orbit.params
    out = []
    for sample in orbit:
        n = sample.n
        prec = sample.precision or params.precision_bits
        if side == "forward":
            if n < 1:
                continue
            target = alpha_fixed_point(AutonomousParams(Fraction(n) / params.N, params.r), prec)
        elif side == "backward":
            if n > -1:
                continue
            plus_first, minus_first = alpha_period2(
                AutonomousParams(Fraction(n) / params.N, params.r), prec
            )
            target = plus_first if n % 2 == 0 else minus_first
        else:
            raise ValueError("side must be 'forward' or 'backward'")
        out.append((n, _distance(sample.plane, target)))
    return out


@dataclass(frozen=True)
class ClassificationReport:
    label: str
    first_exit: int | None
    confinement_events: int
    event_indices: tuple
    window: tuple


def confinement_events(samples: Sequence[OrbitSample], ratio: Number = 10) -> list[int]:
    """Indices k where x_k, x_{k+1} form an opposite-sign pole pair.

    Pattern: |x_k|, |x_{k+1}| both exceed ``ratio`` times the scale set by
    1, |x_{k-1}| and |x_{k+2}|, and x_k + x_{k+1} is small against x_k.
    """
    xs = [s.x for s in samples]
    found = []
    for k in range(1, len(xs) - 2):
        a, b = xs[k], xs[k + 1]
        if a * b >= 0:
            continue
        scale = max(abs(xs[k - 1]), abs(xs[k + 2]), 1)
        if abs(a) < ratio * scale or abs(b) < ratio * scale:
            continue
        if abs(a + b) * ratio > abs(a):
            continue
        found.append(samples[k].n)
    return found


def classify_orbit(orbit: Orbit, window: int | tuple[int, int] | None = None) -> ClassificationReport:
    """Polar if the orbit leaves the open first quadrant at some n >= 1 in the window.

    ``window`` is a last index (the window is then [1, window]) or a pair.
    """
    if window is None:
        window = max(orbit.n_values)
    lo, hi = (1, window) if isinstance(window, int) else window
    lo = max(lo, 1)
    samples = orbit.window(lo, hi)
    first_exit = None
    for s in samples:
        if not (s.x > 0 and (s.y > 0 or s.n == 1)):
            first_exit = s.n
            break
    events = confinement_events(orbit.window(lo - 1, hi))
    label = "polar" if first_exit is not None else "non-polar-so-far"
    return ClassificationReport(label, first_exit, len(events), tuple(events), (lo, hi))


def orbit_rows(orbit: Orbit) -> Iterable[dict]:
    for s in orbit:
        yield {"n": s.n, "x": s.x, "y": s.y, "s": s.s, "f": s.f, "u": s.u}


# ---------------------------------------------------------------------------
# CSV and JSON sidecar
# ---------------------------------------------------------------------------

CSV_COLUMNS = ("n", "x", "y", "s", "f", "u", "delta", "slope", "d_n", "D_n")


def format_cell(value) -> str:
    """Full-precision text: '' for absent, 'exact' for the log sentinel, 'p/q' for rationals."""
    if value is None:
        return ""
    if isinstance(value, BigReal):
        if value is EXACT or value == EXACT:
            return "exact"
        return value.to_decimal()
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    return str(value)


def parse_cell(text: str, column: str, prec: int):
    """Inverse of :func:`format_cell` at ``prec`` bits."""
    if text == "":
        return None
    if column == "n":
        return int(text)
    if text == "exact":
        return EXACT
    if "/" in text or ("." not in text and "e" not in text.lower()):
        return Fraction(text)
    return BigReal(text, prec)


def write_csv(path, rows: Iterable[dict], columns: Sequence[str]) -> None:
    """One row per dict; columns in the given order; LF line endings."""
    with open(path, "w", newline="", encoding="ascii") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_cell(row.get(c)) for c in columns])


def read_csv(path, prec: int) -> list[dict]:
    with open(path, newline="", encoding="ascii") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        return [{c: parse_cell(v, c, prec) for c, v in zip(header, line)} for line in reader]


def git_commit() -> str | None:
    """HEAD of the enclosing git checkout, if any; purely local."""
    try:
        out = subprocess.run(
            ["git", "rev-parse", "HEAD"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True,
            text=True,
            timeout=10,
            check=True,
        )
    except (OSError, subprocess.SubprocessError):
        return None
    return out.stdout.strip() or None


def write_sidecar(path, params: Params | None, argv: Sequence[str], extra: dict | None = None) -> None:
    """JSON run record next to a data file.  No timestamps, so reruns are byte-identical."""
    from . import __version__

    record = {
        "params": params.describe() if params is not None else None,
        "argv": list(argv),
        "version": __version__,
        "git_commit": git_commit(),
    }
    if extra:
        record.update(extra)
    with open(path, "w", encoding="ascii") as handle:
        json.dump(record, handle, indent=2, sort_keys=True)
        handle.write("\n")
