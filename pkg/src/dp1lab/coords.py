"""Asymptotic coordinates: theta variables, (s, f, u), and their dynamics.

In (s, f, u) the non-autonomous dP1 becomes an autonomous 3-D map with the
invariant plane u = 0 at infinity, fixed points P_inf = (2, 2, 0) and
P_-inf = (0, 0, 0), a period-2 orbit, and a line of period-3 orbits.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import PlaneAtInfinity, SingularAxis, SingularFamilyMember, SingularStep
from .maps import PlaneState, dp1_forward
from .numerics import BigReal, Number, Params, sqrt_number


class SfuState(NamedTuple):
    s: Number
    f: Number
    u: Number


class ThetaState(NamedTuple):
    theta1: Number
    theta2: Number
    psi: Number


class Infinite(NamedTuple):
    """Symbolic signed infinity used in the singular period-3 orbit."""

    sign: int

    def __repr__(self):
        return "+inf" if self.sign > 0 else "-inf"


P_INF = SfuState(Fraction(2), Fraction(2), Fraction(0))
P_MINF = SfuState(Fraction(0), Fraction(0), Fraction(0))
PERIOD2_ORBIT = (SfuState(Fraction(2), Fraction(0), Fraction(0)), SfuState(Fraction(0), Fraction(2), Fraction(0)))
SINGULAR_PERIOD3 = (
    SfuState(Fraction(0), Fraction(1), Fraction(0)),
    SfuState(Infinite(1), Infinite(-1), Fraction(0)),
    SfuState(Fraction(1), Fraction(0), Fraction(0)),
)


def to_sfu(state: PlaneState, n: int, params: Params) -> SfuState:
    x, y = state
    if x == 0:
        raise SingularAxis(n, "to_sfu undefined on x = 0")
    r = params.r
    s = y / x + 1 + 1 / (r * x)
    f = n / (params.N * r * x * x) - y / x
    u = -1 / (r * x)
    return SfuState(s, f, u)


def from_sfu(state: SfuState, params: Params) -> tuple[PlaneState, Number]:
    """Back to (x, y) together with alpha = n/N."""
    s, f, u = state
    if u == 0:
        raise PlaneAtInfinity("u = 0 is the plane at infinity")
    r = params.r
    x = -1 / (r * u)
    y = -(s + u - 1) / (r * u)
    alpha = (s + f + u - 1) / (r * u * u)
    return PlaneState(x, y), alpha


def sfu_to_theta(state: SfuState, params: Params) -> ThetaState:
    """Linear change of variables centred on P_-inf."""
    s, f, u = state
    g = params.gamma
    root_n = sqrt_number(params.N, params.precision_bits)
    return ThetaState(-g + g * (u + s + f), -1 + u + s, -g * root_n * u)


def theta_to_sfu(state: ThetaState, params: Params) -> SfuState:
    t1, t2, psi = state
    g = params.gamma
    root_n = sqrt_number(params.N, params.precision_bits)
    u = -psi / (g * root_n)
    s = t2 + 1 - u
    f = (t1 + g) / g - u - s
    return SfuState(s, f, u)


def theta_step(state: ThetaState, params: Params) -> ThetaState:
    t1, t2, psi = state
    g = params.gamma
    root_n = sqrt_number(params.N, params.precision_bits)
    denom = t1 - psi / root_n - g - g * t2
    if denom == 0:
        raise SingularStep("theta-system denominator vanished")
    z = g / denom
    return ThetaState(z * z * (t1 + psi * psi / params.N), z, z * psi)


def sfu_step(state: SfuState, params: Params) -> SfuState:
    s, f, u = state
    denom = u + f - 1
    if denom == 0:
        raise SingularStep("u + f - 1 = 0")
    z = 1 / denom
    return SfuState(z * f, z * z * (s + params.gamma * u * u), z * u)


def plane_map(s: Number, f: Number) -> tuple[Number, Number]:
    """Restriction of the (s, f, u) map to the invariant plane u = 0."""
    if f == 1:
        raise SingularStep("f = 1")
    z = 1 / (f - 1)
    return z * f, z * z * s


def period3_orbit(s0: Number) -> list[SfuState]:
    """The 3-cycle through (s0, 1 - s0, 0) on the line s + f = 1."""
    if s0 == 0 or s0 == 1:
        raise SingularFamilyMember(f"s0 = {s0} lies on the singular period-3 orbit")
    zero = s0 * 0
    return [
        SfuState(s0, 1 - s0, zero),
        SfuState(1 - 1 / s0, 1 / s0, zero),
        SfuState(1 / (1 - s0), 1 / (1 - 1 / s0), zero),
    ]


def period3_drift(a: Number, c: Number, p_steps: int, s0: Number) -> SfuState:
    """Linear prediction after ``p_steps`` full 3-cycles near the period-3 line.

    The perturbation a*(0, -1, 1) + c*(-1/3, 0, 0) of (s0, 1 - s0, 0) is
    pushed through the 3-step Jacobian I + K, K = [[-3,-3,-3],[3,3,3],[0,0,0]].
    K is nilpotent, so the c-part drifts along the line by c per cycle while
    the a-part is carried unchanged.
    """
    return SfuState(s0 - c / 3 + p_steps * c, 1 - s0 - a - p_steps * c, a)


# ---------------------------------------------------------------------------
# Linearization of the theta system
# ---------------------------------------------------------------------------

Complex = tuple  # (re, im)


@dataclass(frozen=True)
class EigenData:
    """Eigenpairs in theta coordinates; complex entries are (re, im) pairs."""

    name: str
    point: ThetaState
    jacobian: tuple
    eigenvalues: tuple
    eigenvectors: tuple

    def residuals(self) -> list:
        """max_i |(J v - lambda v)_i| for each listed pair."""
        out = []
        for lam, vec in zip(self.eigenvalues, self.eigenvectors):
            worst = None
            for i in range(3):
                jv = [0, 0]
                for j in range(3):
                    jv[0] = jv[0] + self.jacobian[i][j] * vec[j][0]
                    jv[1] = jv[1] + self.jacobian[i][j] * vec[j][1]
                lv = _cmul(lam, vec[i])
                dr, di = jv[0] - lv[0], jv[1] - lv[1]
                mag = abs(dr) + abs(di)
                worst = mag if worst is None or mag > worst else worst
            out.append(worst)
        return out


def _cmul(a: Complex, b: Complex) -> Complex:
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def theta_jacobian(state: ThetaState, params: Params) -> tuple:
    """Analytic Jacobian of :func:`theta_step`, rows = outputs."""
    t1, t2, psi = state
    g = params.gamma
    n = params.N
    root_n = sqrt_number(n, params.precision_bits)
    denom = t1 - psi / root_n - g - g * t2
    if denom == 0:
        raise SingularStep("theta-system denominator vanished")
    z = g / denom
    dz = (-z * z / g, z * z, z * z / (g * root_n))
    w = t1 + psi * psi / n
    dw = (1, 0, 2 * psi / n)
    row1 = tuple(2 * z * w * dz[k] + z * z * dw[k] for k in range(3))
    row2 = dz
    row3 = tuple(psi * dz[k] + (z if k == 2 else 0) for k in range(3))
    return (row1, row2, row3)


def linearize_fixed_points(params: Params) -> tuple[EigenData, EigenData]:
    """Eigen data of the theta system at P_inf and P_-inf."""
    prec = params.precision_bits
    g = params.gamma
    root3 = BigReal(3, prec).sqrt()
    root_n = sqrt_number(params.N, prec)
    zero = 0

    def real(v):
        return (v, zero)

    p_inf = ThetaState(3 * g, 1, 0)
    jac_inf = theta_jacobian(p_inf, params)
    inf_vals = (real(1), real(-2 + root3), real(-2 - root3))
    inf_vecs = (
        (real(1), real(0), real(root_n)),
        (real(g * (3 - root3)), real(1), real(0)),
        (real(g * (3 + root3)), real(1), real(0)),
    )

    p_minf = ThetaState(-g, -1, 0)
    jac_minf = theta_jacobian(p_minf, params)
    minf_vals = ((-1, zero), (zero, 1), (zero, -1))
    minf_vecs = (
        (real(g), real(1), real(-g * root_n)),
        ((g, -g), real(1), real(0)),
        ((g, g), real(1), real(0)),
    )
    return (
        EigenData("P_inf", p_inf, jac_inf, inf_vals, inf_vecs),
        EigenData("P_-inf", p_minf, jac_minf, minf_vals, minf_vecs),
    )


# ---------------------------------------------------------------------------
# Singularity confinement
# ---------------------------------------------------------------------------


class ConfinementRecord(NamedTuple):
    n: int
    plane: PlaneState
    sfu: SfuState | None


def confinement_signature(
    y_val: Number, eps: Number, n: int, params: Params, steps: int = 5
) -> list[ConfinementRecord]:
    """Iterate dP1 from (eps, y_val) at index n and record both views.

    The first record is the seed itself; ``steps`` records follow.
    """
    if eps == 0 or n == 0:
        raise ValueError("confinement needs eps != 0 and n != 0")
    state = PlaneState(eps, y_val)
    records = [ConfinementRecord(n, state, to_sfu(state, n, params))]
    for k in range(n, n + steps):
        state = dp1_forward(state, k, params)
        sfu = to_sfu(state, k + 1, params) if state.x != 0 else None
        records.append(ConfinementRecord(k + 1, state, sfu))
    return records
