"""Non-polar initial data: the Lew-Quarles contraction and Freud moments.

A positive dP1 orbit with (x_1, y_1) = (xi_1, xi_0) is the fixed point of

    (T xi)_n = kappa_n g((xi_{n-1} + xi_{n+1}) / (2 kappa_n) + 1 / (2 r kappa_n)),

with kappa_n^2 = n/(N r) and g(tau) = -tau + sqrt(1 + tau^2).  Writing
a = xi_{n-1} + xi_{n+1} + 1/r, the same quantity is

    kappa_n^2 / (a/2 + sqrt(kappa_n^2 + a^2/4)),

which avoids the cancellation in g for large tau and never needs kappa_n
itself.  The sweep below uses that form on raw mpf tuples.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import libmp

from .errors import InsufficientLength, QuadratureNonConvergence
from .maps import PlaneState
from .numerics import RND, BigReal, Number, Params, big_sqrt


def g_of_tau(tau: BigReal) -> BigReal:
    """Positive root of g^2 + 2 tau g - 1 = 0."""
    if not isinstance(tau, BigReal):
        raise TypeError("g_of_tau expects a BigReal")
    root = (1 + tau * tau).sqrt()
    if tau > 0:
        return 1 / (tau + root)
    return root - tau


@dataclass(frozen=True)
class KappaSequence:
    """kappa_n = sqrt(n / (N r)) for n = start, start + 1, ..."""

    start: int
    length: int
    params: Params

    def __post_init__(self):
        if self.start < 1:
            raise ValueError("kappa sequence must start at n >= 1")

    @property
    def indices(self) -> range:
        return range(self.start, self.start + self.length)

    def squared(self, n: int) -> Number:
        return Fraction(n) / (self.params.N * self.params.r)

    def value(self, n: int, prec: int | None = None) -> BigReal:
        return big_sqrt(self.squared(n), prec or self.params.precision_bits)


@dataclass(frozen=True)
class LQState:
    """Truncated sequence xi_1..xi_M with the fixed entry xi_0.

    Entry ``xi[j-1]`` approximates x_{n0+j}; ``xi0`` is x_{n0}.
    """

    xi: tuple
    xi0: BigReal
    n0: int = 0
    contractions: int = 0

    @property
    def M(self) -> int:
        return len(self.xi)

    def seed(self) -> PlaneState:
        """Orbit seed (x_{n0+1}, y_{n0+1}) = (xi_1, xi_0)."""
        return PlaneState(self.xi[0], self.xi0)

    def entry(self, n: int) -> BigReal:
        """x_n for n0 <= n <= n0 + M."""
        if n == self.n0:
            return self.xi0
        return self.xi[n - self.n0 - 1]


def _sweep(xi: list, k2: list, inv_r, prec: int) -> list:
    """One Jacobi application of T on raw mpf lists.

    ``xi`` holds xi_0..xi_{M+1} with both ends fixed; ``k2`` holds
    kappa_n^2 at matching positions.
    """
    add, mul, div, sqrt, shift = (
        libmp.mpf_add, libmp.mpf_mul, libmp.mpf_div, libmp.mpf_sqrt, libmp.mpf_shift,
    )
    out = list(xi)
    for n in range(1, len(xi) - 1):
        half = shift(add(add(xi[n - 1], xi[n + 1], prec, RND), inv_r, prec, RND), -1)
        root = sqrt(add(k2[n], mul(half, half, prec, RND), prec, RND), prec, RND)
        out[n] = div(k2[n], add(half, root, prec, RND), prec, RND)
    return out


def _raw_setup(xi0: BigReal, values: list, n0: int, params: Params, prec: int):
    M = len(values)
    kap = KappaSequence(n0 + 1, M + 1, params)
    k2 = [libmp.fzero] + [BigReal(kap.squared(n), prec)._mpf for n in kap.indices]
    edge = kap.value(n0 + M + 1, prec)._mpf
    raw = [BigReal(xi0, prec)._mpf] + [BigReal(v, prec)._mpf for v in values] + [edge]
    inv_r = BigReal(1 / params.r, prec)._mpf
    return raw, k2, inv_r


def lq_contract(state: LQState, kappas: KappaSequence, params: Params) -> LQState:
    """Apply T once.  The entry past the truncation edge is pinned to kappa_{M+1}."""
    if state.M < 2:
        raise InsufficientLength("need at least two entries")
    if kappas.start != state.n0 + 1 or kappas.length < state.M:
        raise ValueError("kappa sequence does not cover the state")
    prec = params.precision_bits
    raw, k2, inv_r = _raw_setup(state.xi0, list(state.xi), state.n0, params, prec)
    raw = _sweep(raw, k2, inv_r, prec)
    xi = tuple(BigReal._raw(m, prec) for m in raw[1:-1])
    return LQState(xi, state.xi0, state.n0, state.contractions + 1)


def lq_solve_truncated(
    n0: int, x_n0: Number, M: int | None, Nc: int | None, params: Params
) -> LQState:
    """Positive dP1 solution through x_{n0}, from Nc contractions of the zero sequence."""
    if n0 < 0:
        raise ValueError("n0 must be >= 0")
    if x_n0 < 0 or (n0 >= 1 and x_n0 <= 0):
        raise ValueError("x_n0 must be positive (non-negative at n0 = 0)")
    Nc = params.contraction_count if Nc is None else Nc
    M = Nc + 1 if M is None else M
    if M < Nc + 1:
        raise InsufficientLength(f"M = {M} < Nc + 1 = {Nc + 1}")
    prec = params.precision_bits
    x0 = BigReal(x_n0, prec)
    raw, k2, inv_r = _raw_setup(x0, [0] * M, n0, params, prec)
    for _ in range(Nc):
        raw = _sweep(raw, k2, inv_r, prec)
    xi = tuple(BigReal._raw(m, prec) for m in raw[1:-1])
    return LQState(xi, x0, n0, Nc)


def lq_solve(xi0: Number, M: int | None, Nc: int | None, params: Params) -> LQState:
    """Lew-Quarles solution with y_1 = xi0 >= 0; its seed is (xi_1, xi0)."""
    if xi0 < 0:
        raise ValueError("xi0 must be non-negative")
    return lq_solve_truncated(0, xi0, M, Nc, params)


def lq_ratio_limit_check(state: LQState, kappas: KappaSequence, index: int | None = None) -> BigReal:
    """xi_m / kappa_m, by default at the last entry (m = n0 + M).

    The ratio tends to 1/sqrt(3).  Entries within O(Nc) of the truncation
    edge feel the pinned boundary, so pass an interior ``index`` to probe
    the limit itself.
    """
    if state.M < 100:
        raise InsufficientLength("ratio check needs at least 100 entries")
    m = state.n0 + state.M if index is None else index
    value = state.entry(m)
    return value / kappas.value(m, value.prec)


# ---------------------------------------------------------------------------
# Moments of the quartic weight
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MomentTable:
    """Even moments mu_i of exp(-N(l^2/2 + r l^4/4)) over the real line."""

    mu: dict = field(default_factory=dict)
    N: Number = Fraction(1)
    r: Number = Fraction(1)
    precision: int = 4096

    def __getitem__(self, i: int) -> BigReal | int:
        if i % 2:
            return 0
        return self.mu[i]

    def recurrence_residual(self, i: int) -> BigReal:
        """(i+1) mu_i - N (mu_{i+2} + r mu_{i+4})."""
        return (i + 1) * self[i] - self.N * (self[i + 2] + self.r * self[i + 4])


def _tail_length(i: int, n_val, r_val, digits: int, ctx) -> object:
    target = -(digits + 10) * ctx.log(10)
    L = ctx.mpf(1)
    while True:
        log_tail = -n_val * (L**2 / 2 + r_val * L**4 / 4) + i * ctx.log(L)
        if L > 1 and log_tail < target:
            return L
        L *= 2


def moments(max_even_index: int, params: Params, precision: int | None = None) -> MomentTable:
    """mu_0 and mu_2 by tanh-sinh quadrature; the rest by the recurrence.

    Integration by parts gives (i+1) mu_i = N (mu_{i+2} + r mu_{i+4}), used
    upward from mu_0, mu_2.  The upward recurrence cancels, so it runs with
    guard bits that are increased until the accumulated loss is covered.
    """
    if max_even_index < 4:
        raise ValueError("max_even_index must be >= 4")
    prec = precision or params.precision_bits
    digits = libmp.prec_to_dps(prec)
    ctx = mpmath.MPContext()
    ctx.prec = prec + 64

    def as_ctx(v):
        if isinstance(v, BigReal):
            return ctx.make_mpf(libmp.mpf_pos(v._mpf, ctx.prec, RND))
        v = Fraction(v)
        return ctx.mpf(v.numerator) / v.denominator

    n_val, r_val = as_ctx(params.N), as_ctx(params.r)
    base = {}
    for i in (0, 2):
        L = _tail_length(i, n_val, r_val, digits, ctx)
        cuts = [ctx.mpf(0)]
        edge = ctx.mpf(1) / 2
        while edge < L:
            cuts.append(edge)
            edge *= 2
        cuts.append(L)
        value, err = ctx.quad(
            lambda t, i=i: t**i * ctx.exp(-n_val * (t**2 / 2 + r_val * t**4 / 4)),
            cuts,
            error=True,
        )
        if not err <= abs(value) * ctx.mpf(10) ** (-digits):
            raise QuadratureNonConvergence(f"mu_{i}: error estimate {ctx.nstr(err, 5)}")
        base[i] = 2 * value

    guard = 64
    while True:
        wp = prec + guard
        mu = {0: BigReal._raw(libmp.mpf_pos(base[0]._mpf_, wp, RND), wp),
              2: BigReal._raw(libmp.mpf_pos(base[2]._mpf_, wp, RND), wp)}
        N_big, r_big = BigReal(params.N, wp), BigReal(params.r, wp)
        lost = 0.0
        for i in range(0, max_even_index - 3, 2):
            a = (i + 1) * mu[i] / N_big
            b = mu[i + 2]
            diff = a - b
            lost += max(0.0, float((max(abs(a), abs(b)) / abs(diff)).log()) / 0.6931471805599453)
            mu[i + 4] = diff / r_big
        if lost + 8 < guard:
            break
        guard = int(lost) + 64
    table = {k: v.with_precision(prec) for k, v in mu.items() if k <= max_even_index}
    return MomentTable(table, params.N, params.r, prec)


def freud_init_from_moments(table: MomentTable) -> tuple[BigReal, BigReal]:
    """b_1^2 = mu_2/mu_0 and b_2^2 = (mu_4 mu_0 - mu_2^2)/(mu_0 mu_2)."""
    mu0, mu2, mu4 = table[0], table[2], table[4]
    return mu2 / mu0, (mu4 * mu0 - mu2 * mu2) / (mu0 * mu2)


def freud_seed(params: Params, method: str = "lq", Nc: int | None = None) -> PlaneState:
    """(x_1^F, y_1^F) = (b_1^2, 0)."""
    if method == "lq":
        x1 = lq_solve(0, None, Nc, params).xi[0]
    elif method == "moments":
        x1, _ = freud_init_from_moments(moments(4, params))
    else:
        raise ValueError(f"unknown Freud initialisation {method!r}")
    return PlaneState(x1, BigReal(0, params.precision_bits))
