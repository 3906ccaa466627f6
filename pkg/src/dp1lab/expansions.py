"""Invariant curves through P_inf and P_-inf, and the u_n asymptotics they imply.

A curve (s(u), f(u), u) is invariant under the (s, f, u) map when

    s(Z u) = Z f(u),   f(Z u) = Z^2 (s(u) + gamma u^2),   Z = 1/(u + f(u) - 1).

Expanding in powers of u, the degree-k part of this condition is affine in
the unknown pair (s_k, f_k) and involves only lower coefficients
otherwise.  The affine map is found by probing and then solved exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import PlaneAtInfinity
from .numerics import BigReal, GammaPoly, Number, Params, big_sqrt, eval_gamma_poly

ZERO = GammaPoly()
ONE = GammaPoly.constant(1)


def _gp(value) -> GammaPoly:
    return value if isinstance(value, GammaPoly) else GammaPoly.constant(value)


@dataclass(frozen=True)
class USeries:
    """Power series sum_k coeffs[k] u^k truncated at degree ``order``."""

    coeffs: tuple
    order: int

    def __post_init__(self):
        c = [_gp(a) for a in self.coeffs[: self.order + 1]]
        c += [ZERO] * (self.order + 1 - len(c))
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def variable(cls, order: int) -> "USeries":
        return cls((ZERO, ONE), order)

    def __getitem__(self, k: int) -> GammaPoly:
        return self.coeffs[k] if 0 <= k <= self.order else ZERO

    def truncate(self, order: int) -> "USeries":
        return USeries(self.coeffs, min(order, self.order))

    def _other(self, other):
        if isinstance(other, USeries):
            return other
        return USeries((_gp(other),), self.order)

    def __add__(self, other):
        o = self._other(other)
        order = min(self.order, o.order)
        return USeries(tuple(self[k] + o[k] for k in range(order + 1)), order)

    __radd__ = __add__

    def __neg__(self):
        return USeries(tuple(-a for a in self.coeffs), self.order)

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        if not isinstance(other, USeries):
            g = _gp(other)
            return USeries(tuple(a * g for a in self.coeffs), self.order)
        order = min(self.order, other.order)
        out = [ZERO] * (order + 1)
        for i in range(order + 1):
            a = self[i]
            if a.is_zero():
                continue
            for j in range(order + 1 - i):
                b = other[j]
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return USeries(tuple(out), order)

    __rmul__ = __mul__

    def shift(self, k: int = 1) -> "USeries":
        """Multiply by u^k."""
        return USeries((ZERO,) * k + self.coeffs, self.order)

    def reciprocal(self) -> "USeries":
        c0 = self[0]
        if not c0.is_constant() or c0.is_zero():
            raise ZeroDivisionError("reciprocal needs a non-zero constant leading term")
        inv0 = 1 / c0.constant_term()
        out = [GammaPoly.constant(inv0)]
        for k in range(1, self.order + 1):
            acc = ZERO
            for j in range(1, k + 1):
                acc = acc + self[j] * out[k - j]
            out.append(acc.scale(-inv0))
        return USeries(tuple(out), self.order)

    def compose(self, inner: "USeries") -> "USeries":
        """self(inner(u)); ``inner`` must vanish at u = 0."""
        if not inner[0].is_zero():
            raise ValueError("inner series must have zero constant term")
        order = min(self.order, inner.order)
        acc = USeries((self[order],), order)
        for k in range(order - 1, -1, -1):
            acc = acc * inner + self[k]
        return acc

    def evaluate(self, u, gamma):
        acc = u * 0
        for a in reversed(self.coeffs):
            acc = acc * u + eval_gamma_poly(a, gamma)
        return acc

    def substitute_gamma(self, gamma: Fraction) -> "USeries":
        return USeries(tuple(GammaPoly.constant(a(gamma)) for a in self.coeffs), self.order)

    def to_json(self) -> list:
        return [
            {"power": k, "gamma_poly_coeffs": a.to_strings()}
            for k, a in enumerate(self.coeffs)
        ]

    @classmethod
    def from_json(cls, items: Sequence[dict]) -> "USeries":
        from .numerics import poly_from_strings

        order = max(item["power"] for item in items)
        coeffs = [ZERO] * (order + 1)
        for item in items:
            coeffs[item["power"]] = poly_from_strings(item["gamma_poly_coeffs"])
        return cls(tuple(coeffs), order)


def _gamma_coefficient(gamma) -> GammaPoly:
    return GammaPoly.gamma() if gamma is None else GammaPoly.constant(Fraction(gamma))


def invariance_residual(s: USeries, f: USeries, gamma=None) -> tuple[USeries, USeries]:
    """Residuals of the two invariance equations, truncated at the curves' order."""
    order = min(s.order, f.order)
    u = USeries.variable(order)
    z = (u + f - 1).reciprocal()
    w = z * u
    first = s.compose(w) - z * f
    second = f.compose(w) - z * z * (s + u * u * _gamma_coefficient(gamma))
    return first, second


def _degree_residual(s_coeffs, f_coeffs, k, gamma):
    s = USeries(tuple(s_coeffs[: k + 1]), k)
    f = USeries(tuple(f_coeffs[: k + 1]), k)
    first, second = invariance_residual(s, f, gamma)
    return first[k], second[k]


def _solve_invariant_curve(s_fixed, f_fixed, order, gamma):
    """Extend fixed low-order coefficients up to ``order``, one degree at a time."""
    s_coeffs = [_gp(a) for a in s_fixed] + [ZERO] * (order + 1 - len(s_fixed))
    f_coeffs = [_gp(a) for a in f_fixed] + [ZERO] * (order + 1 - len(f_fixed))
    for k in range(len(s_fixed), order + 1):
        base = _degree_residual(s_coeffs, f_coeffs, k, gamma)
        s_coeffs[k] = ONE
        probe_s = _degree_residual(s_coeffs, f_coeffs, k, gamma)
        s_coeffs[k] = ZERO
        f_coeffs[k] = ONE
        probe_f = _degree_residual(s_coeffs, f_coeffs, k, gamma)
        f_coeffs[k] = ZERO
        m = [[probe_s[i] - base[i], probe_f[i] - base[i]] for i in range(2)]
        if not all(e.is_constant() for row in m for e in row):
            raise ArithmeticError(f"degree {k}: linear system depends on gamma")
        a, b = m[0][0].constant_term(), m[0][1].constant_term()
        c, d = m[1][0].constant_term(), m[1][1].constant_term()
        det = a * d - b * c
        if det == 0:
            raise ArithmeticError(f"degree {k}: invariance condition is not solvable")
        r1, r2 = -base[0], -base[1]
        s_coeffs[k] = (r1.scale(d) - r2.scale(b)).scale(1 / det)
        f_coeffs[k] = (r2.scale(a) - r1.scale(c)).scale(1 / det)
    return USeries(tuple(s_coeffs), order), USeries(tuple(f_coeffs), order)


def invariant_curve_p_inf(order: int, gamma=None) -> tuple[USeries, USeries]:
    """Centre manifold of P_inf, tangent to the eigendirection (-1, -1, 1)."""
    if order < 2:
        raise ValueError("order must be >= 2")
    return _solve_invariant_curve([2, -1], [2, -1], order, gamma)


def invariant_curve_p_minf(order: int, gamma=None) -> tuple[USeries, USeries]:
    """Formal invariant curve leaving P_-inf perpendicular to u = 0."""
    if order < 2:
        raise ValueError("order must be >= 2")
    return _solve_invariant_curve([0], [0], order, gamma)


# ---------------------------------------------------------------------------
# u_n as a series in |n|^(-1/2)
# ---------------------------------------------------------------------------

SIDES = {"pinf": (1, Fraction(3)), "pminf": (-1, Fraction(1))}


@dataclass(frozen=True)
class HalfPowerSeries:
    """u_n = sum_{k>=1} coeffs[k-1](gamma) * t^k with t = sqrt(scale / (gamma |n|)).

    The gauge t absorbs the irrational factors (sqrt(3), sqrt(gamma)), so every
    coefficient is an exact polynomial in gamma.  The coefficient of
    |n|^(-k/2) is ``coeffs[k-1] * (scale/gamma)^(k/2)``.
    """

    side: str
    branch: int
    scale: Fraction
    coeffs: tuple

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def t(self, n: int, gamma: Number, prec: int) -> BigReal:
        sign = SIDES[self.side][0]
        if n == 0 or (n > 0) != (sign > 0):
            raise ValueError(f"n = {n} is on the wrong side for {self.side}")
        return big_sqrt(self.scale / (gamma * abs(n)), prec)

    def evaluate(self, n: int, gamma: Number, prec: int) -> BigReal:
        t = self.t(n, gamma, prec)
        acc = BigReal(0, prec)
        for c in reversed(self.coeffs):
            acc = (acc + eval_gamma_poly(c, gamma)) * t
        return acc

    def n_power_coefficient(self, k: int, gamma: Number, prec: int) -> BigReal:
        """Numerical coefficient of |n|^(-k/2)."""
        factor = big_sqrt(self.scale / gamma, prec) ** k
        return factor * eval_gamma_poly(self.coeffs[k - 1], gamma)

    def to_json(self) -> dict:
        return {
            "side": self.side,
            "branch": "+" if self.branch > 0 else "-",
            "gauge": f"t = sqrt({self.scale}/(gamma*|n|))",
            "terms": [
                {"t_power": k + 1, "gamma_poly_coeffs": c.to_strings()}
                for k, c in enumerate(self.coeffs)
            ],
        }


def u_asymptotic(side: str, branch: int, order: int, gamma=None) -> HalfPowerSeries:
    """Revert gamma n u^2 - u + 1 = s(u) + f(u) along the invariant curve.

    With u = t v and gamma |n| = scale / t^2 the condition becomes

        sign * scale * v^2 - t v + 1 - S(t v) = 0,   S = s + f,

    a regular problem for v(t) with v(0) = branch.
    """
    if side not in SIDES:
        raise ValueError(f"side must be one of {sorted(SIDES)}")
    if branch not in (1, -1):
        raise ValueError("branch must be +1 or -1")
    if order < 1:
        raise ValueError("order must be >= 1")
    sign, scale = SIDES[side]
    curve = invariant_curve_p_inf if side == "pinf" else invariant_curve_p_minf
    s, f = curve(max(order, 2), gamma)
    total = s + f
    k_max = order - 1
    v = [GammaPoly.constant(branch)] + [ZERO] * k_max
    lead = 2 * sign * scale * branch
    for j in range(0, k_max + 1):
        vs = USeries(tuple(v), k_max)
        t = USeries.variable(k_max)
        eq = vs * vs * (sign * scale) - t * vs + 1 - total.truncate(k_max).compose(t * vs)
        if j == 0:
            if not eq[0].is_zero():
                raise ArithmeticError("leading balance fails")
            continue
        v[j] = (-eq[j]).scale(Fraction(1) / lead)
    return HalfPowerSeries(side, branch, scale, tuple(v))


def x_laurent_from_u(series: HalfPowerSeries) -> list[GammaPoly]:
    """Coefficients of r*x = -1/u in powers t^-1, t^0, ..., t^(order-2)."""
    v = USeries(series.coeffs, series.order - 1)
    inv = v.reciprocal()
    return [-c for c in inv.coeffs]


def x_asymptotic(n: int, params: Params, prec: int | None = None) -> BigReal:
    """Three-term large-n expansion of the Freud orbit."""
    if n < 1:
        raise ValueError("x_asymptotic needs n >= 1")
    prec = prec or params.precision_bits
    r, N = params.r, params.N
    lead = big_sqrt(Fraction(n) / (3 * r * N), prec)
    third = big_sqrt(12, prec) / 144 * big_sqrt(N / Fraction(n), prec) / big_sqrt(r, prec) ** 3
    return lead - 1 / (6 * r) + third


def center_manifold_xyn(u: Number, params: Params) -> tuple[Number, Number, Number]:
    """Closed-form (x, y, n) parametrisation of the P_inf centre manifold, N = 1.

    The parameter equals -r times the asymptotic coordinate u, so x = 1/u.
    """
    if params.N != 1:
        raise ValueError("the closed-form parametrisation assumes N = 1")
    if u == 0:
        raise PlaneAtInfinity("u = 0")
    r = params.r
    y_num = (
        12 * r**2 * (u**2 - 9 * u + 3) * u**5
        - 36 * r**3 * (u**2 - 9 * u + 6) * u**4
        + 648 * r**4 * (2 - u) * u**3
        - 7776 * r**5 * u**2
        + 46656 * r**6
        - 6 * r * (1 - 5 * u) * u**6
        + u**7
    )
    y = y_num / (46656 * r**6 * u)
    n_val = (
        5 * u**7 / (3888 * r**4)
        - u**6 / (216 * r**3)
        + u**5 / (72 * r**2)
        - u**4 / (36 * r)
        + 3 * r
        + u
    ) / u**2
    return 1 / u, y, n_val
