"""The dP1 birational maps and the autonomous alpha-dP1 family.

Every function is generic over the number type.  Fed ``Fraction`` values
it is exact; fed :class:`~dp1lab.numerics.BigReal` values it runs at their
precision.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import ComplexRoot, NotGenuine, SingularAxis
from .numerics import Number, Params, precision_of, sqrt_number


class PlaneState(NamedTuple):
    x: Number
    y: Number


@dataclass(frozen=True)
class AutonomousParams:
    """alpha-dP1: the dP1 map with n/N frozen to the constant ``alpha``."""

    alpha: Number
    r: Number = Fraction(1)

    def __post_init__(self):
        for name in ("alpha", "r"):
            v = getattr(self, name)
            if isinstance(v, int) and not isinstance(v, bool):
                object.__setattr__(self, name, Fraction(v))
        if self.r <= 0:
            raise ValueError("r must be positive")


def dp1_forward(state: PlaneState, n: int, params: Params) -> PlaneState:
    """(x_n, y_n) -> (x_{n+1}, y_{n+1}).

    At n = 0 the n/(N r x) term is zero even when x = 0; this is the limit
    taken from the non-singular Lew-Quarles orbits.
    """
    x, y = state
    if x == 0:
        if n != 0:
            raise SingularAxis(n)
        pole = 0
    else:
        pole = n / (params.N * params.r * x)
    return PlaneState(pole - 1 / params.r - x - y, x)


def dp1_inverse(state: PlaneState, n: int, params: Params) -> PlaneState:
    """(x_{n+1}, y_{n+1}) -> (x_n, y_n); same limit rule on y = 0 at n = 0."""
    x, y = state
    if y == 0:
        if n != 0:
            raise SingularAxis(n)
        pole = 0
    else:
        pole = n / (params.N * params.r * y)
    return PlaneState(y, pole - 1 / params.r - x - y)


def alpha_dp1_step(state: PlaneState, ap: AutonomousParams) -> PlaneState:
    x, y = state
    if x == 0:
        raise SingularAxis(None, "alpha-dP1 is singular on x = 0")
    return PlaneState(ap.alpha / (ap.r * x) - 1 / ap.r - x - y, x)


def alpha_fixed_point(ap: AutonomousParams, precision: int | None = None) -> PlaneState:
    """Hyperbolic fixed point (w, w) with w = (-1 + sqrt(1 + 12 alpha r)) / (6 r)."""
    radicand = 1 + 12 * ap.alpha * ap.r
    if radicand < 0:
        raise ComplexRoot(f"1 + 12 alpha r = {radicand} < 0")
    root = sqrt_number(radicand, precision or precision_of(ap.alpha, ap.r))
    w = (-1 + root) / (6 * ap.r)
    return PlaneState(w, w)


def alpha_period2(
    ap: AutonomousParams, precision: int | None = None
) -> tuple[PlaneState, PlaneState]:
    """The unique genuine period-2 orbit, defined for alpha < 0."""
    if ap.alpha >= 0:
        raise NotGenuine(f"no genuine period-2 orbit for alpha = {ap.alpha}")
    root = sqrt_number(1 - 4 * ap.alpha * ap.r, precision or precision_of(ap.alpha, ap.r))
    plus = (-1 + root) / (2 * ap.r)
    minus = (-1 - root) / (2 * ap.r)
    return PlaneState(plus, minus), PlaneState(minus, plus)


def qrt_invariant(state: PlaneState, ap: AutonomousParams) -> Number:
    """Biquadratic first integral I(x, y) = xy(x + y) + xy/r - (alpha/r)(x + y)."""
    x, y = state
    return x * y * (x + y) + x * y / ap.r - ap.alpha / ap.r * (x + y)


def qrt_vertical_partner(state: PlaneState, ap: AutonomousParams) -> PlaneState:
    """Geometric QRT step: second intersection with the vertical line, reflected.

    I(x, t) - I(x, y) is a quadratic in t.  Its coefficients are recovered
    by interpolating I at t = -1, 0, 1, so the partner root comes from the
    level set alone, not from the map formula.
    """
    x, y = state
    if x == 0:
        raise SingularAxis(None, "vertical partner undefined on x = 0")
    i_minus = qrt_invariant(PlaneState(x, -1), ap)
    i_zero = qrt_invariant(PlaneState(x, 0), ap)
    i_plus = qrt_invariant(PlaneState(x, 1), ap)
    lead = (i_plus + i_minus) / 2 - i_zero
    linear = (i_plus - i_minus) / 2
    other = -linear / lead - y
    return PlaneState(other, x)


def freud_residual(triple, n: int, params: Params) -> Number:
    """r x (x_next + x + x_prev) + x - n/N; zero on exact dP1 orbits."""
    x_prev, x, x_next = triple
    return params.r * x * (x_next + x + x_prev) + x - Fraction(n) / params.N
