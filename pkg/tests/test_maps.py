from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from dp1lab.errors import NotGenuine, SingularAxis
from dp1lab.maps import (
    AutonomousParams,
    PlaneState,
    alpha_dp1_step,
    alpha_fixed_point,
    alpha_period2,
    dp1_forward,
    dp1_inverse,
    freud_residual,
    qrt_invariant,
    qrt_vertical_partner,
)
from dp1lab.numerics import BigReal, Params

ONE = Params(1, 1)
nonzero = st.fractions(min_value=-20, max_value=20, max_denominator=50).filter(lambda v: v != 0)
values = st.fractions(min_value=-20, max_value=20, max_denominator=50)
positive = st.fractions(min_value=Fraction(1, 10), max_value=10, max_denominator=20)
params_st = st.builds(Params, positive, positive)


def test_forward_example():
    assert dp1_forward(PlaneState(Fraction(1), Fraction(0)), 1, ONE) == (-1, 1)


def test_inverse_example():
    assert dp1_inverse(PlaneState(Fraction(-1), Fraction(1)), 1, ONE) == (1, 0)


def test_inverse_extension_at_zero():
    x1 = Fraction(47, 100)
    assert dp1_inverse(PlaneState(x1, Fraction(0)), 0, ONE) == (0, -1 - x1)


def test_singular_axes():
    with pytest.raises(SingularAxis):
        dp1_inverse(PlaneState(Fraction(1), Fraction(0)), 2, ONE)
    with pytest.raises(SingularAxis):
        dp1_forward(PlaneState(Fraction(0), Fraction(1)), 3, ONE)
    assert dp1_forward(PlaneState(Fraction(0), Fraction(2)), 0, ONE) == (-3, 0)


def test_fixed_point_of_frozen_map():
    n = 2
    w = alpha_fixed_point(AutonomousParams(Fraction(n), 1))
    assert w == (Fraction(2, 3), Fraction(2, 3))
    assert dp1_forward(w, n, ONE) == w


@settings(max_examples=200)
@given(nonzero, nonzero, st.integers(-50, 50), params_st)
def test_birational_pair(x, y, n, params):
    s = PlaneState(x, y)
    fwd = dp1_forward(s, n, params)
    if fwd.y != 0:
        assert dp1_inverse(fwd, n, params) == s
    inv = dp1_inverse(s, n, params)
    if inv.x != 0:
        assert dp1_forward(inv, n, params) == s


def test_alpha_step_examples():
    ap = AutonomousParams(Fraction(1), Fraction(1))
    assert alpha_dp1_step(PlaneState(Fraction(1), Fraction(0)), ap) == (-1, 1)


def test_alpha_fixed_point_examples():
    assert alpha_fixed_point(AutonomousParams(0, 1)) == (0, 0)
    w = alpha_fixed_point(AutonomousParams(1, 1), 200)
    assert abs(float(w.x) - 0.43425854591066493) < 1e-15
    assert alpha_fixed_point(AutonomousParams(2, 1)) == (Fraction(2, 3), Fraction(2, 3))


def test_alpha_period2_examples():
    assert alpha_period2(AutonomousParams(-2, 1)) == ((1, -2), (-2, 1))
    assert alpha_period2(AutonomousParams(-6, 1)) == ((2, -3), (-3, 2))
    with pytest.raises(NotGenuine):
        alpha_period2(AutonomousParams(0, 1))


@given(st.fractions(max_value=Fraction(-1, 30), min_value=-40, max_denominator=30), positive)
def test_period2_is_genuine_period2(alpha, r):
    ap = AutonomousParams(alpha, r)
    a, b = alpha_period2(ap, 300)
    assert a != b
    image = alpha_dp1_step(a, ap)
    assert abs(float(image.x - b.x)) < 1e-70 and abs(float(image.y - b.y)) < 1e-70


def test_qrt_invariant_examples():
    ap = AutonomousParams(1, 1)
    assert qrt_invariant(PlaneState(0, 0), ap) == 0
    w = alpha_fixed_point(ap, 200)
    assert abs(float(qrt_invariant(w, ap)) + 0.5158) < 5e-4


def test_qrt_invariant_symbolic_conservation():
    x, y, a, r = sympy.symbols("x y alpha r", nonzero=True)
    inv = lambda X, Y: X * Y * (X + Y) + X * Y / r - a / r * (X + Y)
    xn = a / (r * x) - 1 / r - x - y
    assert sympy.simplify(inv(xn, x) - inv(x, y)) == 0


@settings(max_examples=100)
@given(nonzero, values, values, positive)
def test_vertical_partner_equals_step(x, y, alpha, r):
    ap = AutonomousParams(alpha, r)
    s = PlaneState(x, y)
    assert qrt_vertical_partner(s, ap) == alpha_dp1_step(s, ap)
    assert qrt_invariant(alpha_dp1_step(s, ap), ap) == qrt_invariant(s, ap)


def test_vertical_partner_examples():
    ap = AutonomousParams(1, 1)
    assert qrt_vertical_partner(PlaneState(Fraction(1), Fraction(0)), ap) == (-1, 1)
    ap2 = AutonomousParams(2, 1)
    w = alpha_fixed_point(ap2)
    assert qrt_vertical_partner(w, ap2) == w


@pytest.mark.parametrize("seed", [(Fraction(1, 2), Fraction(1, 3)), (Fraction(1, 2), Fraction(2, 5))])
def test_qrt_conservation_bound_at_256_bits(seed):
    # Rounding in I scales with its largest term, so the per-step allowance
    # carries the cube of the largest coordinate met so far.
    ap = AutonomousParams(Fraction(1), Fraction(1))
    s = PlaneState(BigReal(seed[0], 256), BigReal(seed[1], 256))
    i0 = qrt_invariant(s, ap)
    unit = BigReal(2, 256) ** (10 - 256)
    big = 1
    for k in range(1, 1001):
        s = alpha_dp1_step(s, ap)
        big = max(big, abs(s.x), abs(s.y))
        assert abs(qrt_invariant(s, ap) - i0) <= k * unit * (1 + abs(i0) + big**3)


@settings(max_examples=100)
@given(nonzero, nonzero, st.integers(1, 40), params_st)
def test_freud_residual_vanishes_on_orbits(x, y, n, params):
    s0 = PlaneState(x, y)
    s1 = dp1_forward(s0, n, params)
    assume(s1.x != 0)
    # (x_{n-1}, x_n, x_{n+1}) = (y, x, x_next) at index n
    assert freud_residual((y, x, s1.x), n, params) == 0
    bumped = freud_residual((y, x, s1.x + 1), n, params)
    assert bumped == params.r * x
