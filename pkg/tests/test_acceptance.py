"""Acceptance criteria A1-A11 at their stated tolerances.

Each test records one PASS/FAIL line, printed in the terminal summary.
Where a criterion leaves a bound open, the value used here is a
calibration and is noted at the test.
"""
import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from conftest import ACCEPTANCE_RESULTS
from dp1lab.coords import SfuState, confinement_signature, from_sfu, period3_orbit, sfu_step, to_sfu
from dp1lab.diagnostics import log_distance, secant_slope, track_alpha_points, turnaround_index
from dp1lab.expansions import invariant_curve_p_inf, invariant_curve_p_minf, u_asymptotic, x_asymptotic
from dp1lab.lewquarles import freud_init_from_moments, moments
from dp1lab.maps import (
    AutonomousParams,
    PlaneState,
    alpha_dp1_step,
    alpha_period2,
    dp1_forward,
    dp1_inverse,
    qrt_invariant,
    qrt_vertical_partner,
)
from dp1lab.numerics import BigReal, Params

from reference_series import F_PINF_6, F_PMINF_10, S_PINF_6, S_PMINF_10, as_rationals, gamma_poly_rationals

LOG_LAMBDA = math.log(2 - math.sqrt(3))


def record(key, ok, detail):
    ACCEPTANCE_RESULTS[key] = (bool(ok), detail)
    print(f"{key} {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def test_A1_series_exactness():
    s6, f6 = invariant_curve_p_inf(6)
    s10, f10 = invariant_curve_p_minf(10)
    mismatches = []
    for name, series, table in (("s_inf", s6, S_PINF_6), ("f_inf", f6, F_PINF_6),
                                ("s_-inf", s10, S_PMINF_10), ("f_-inf", f10, F_PMINF_10)):
        for k, expr in enumerate(table):
            if as_rationals(expr) != gamma_poly_rationals(series[k]):
                mismatches.append(f"{name}[u^{k}]")
    record("A1", not mismatches, f"order-6 and order-10 tables, mismatches: {mismatches or 'none'}")


@pytest.mark.slow
def test_A2_freud_initial_condition(freud_state, freud_params):
    x1 = freud_state.xi[0]
    b1, _ = freud_init_from_moments(moments(4, freud_params))
    rel = abs((x1 - b1) / b1)
    digits = -float(rel.log()) / math.log(10) if rel != 0 else float("inf")
    ok = digits >= 50 and abs(float(x1) - 0.47) < 0.005
    record("A2", ok, f"x1 = {x1.to_decimal(20)}, agreement with mu2/mu0: {digits:.0f} digits (need 50)")


@pytest.mark.slow
def test_A3_positivity_and_quadrants(freud_orbit):
    positive = all(freud_orbit[n].x > 0 for n in range(1, 226))
    x0_zero = freud_orbit[0].x == 0
    quadrants = []
    for n in range(-224, 0):
        s = freud_orbit[n]
        quadrants.append(2 if s.x < 0 < s.y else 4 if s.y < 0 < s.x else 0)
    alternating = 0 not in quadrants and all(a != b for a, b in zip(quadrants, quadrants[1:]))
    record("A3", positive and x0_zero and alternating,
           f"x_n>0 on [1,225]: {positive}; x_0 = 0: {x0_zero}; quadrants 2/4 alternate on [-224,-1]: {alternating}")


@pytest.mark.slow
def test_A4_convergence_rate(freud_orbit, lq_orbit_cache):
    # calibrated window [30, 150] and tolerance 0.02
    curves = {}
    for xi0 in (10, 40, 160, 640, 2560, 6400):
        slopes = dict(secant_slope(log_distance(lq_orbit_cache(xi0, 800), freud_orbit)))
        curves[xi0] = [float(slopes[n]) for n in range(30, 151)]
    dev = max(abs(v - LOG_LAMBDA) for c in curves.values() for v in c)
    spread = max(max(abs(a - b) for a, b in zip(curves[i], curves[j])) for i in curves for j in curves)
    worst = max(curves[10], key=lambda v: abs(v - LOG_LAMBDA))
    record("A4", dev <= 0.02 and spread <= 0.02,
           f"max |slope - log(2-sqrt3)| = {dev:.4f} (tol 0.02, worst slope {worst:.4f}); pairwise sup = {spread:.2e} (tol 0.02)")


@pytest.mark.slow
def test_A5_turnaround_monotone(freud_orbit, lq_orbit_cache):
    turns = [turnaround_index(log_distance(lq_orbit_cache(20, nc), freud_orbit)) for nc in (200, 400, 800)]
    record("A5", turns[0] < turns[1] < turns[2], f"turnaround for Nc = 200, 400, 800: {turns}")


def _window_max(errors, lo, hi):
    return max(errors[n] for n in range(lo, hi + 1))


@pytest.mark.slow
def test_A6_tracking_p_inf(freud_orbit, freud_params):
    series = u_asymptotic("pinf", -1, 3)
    prec = freud_params.precision_bits
    err = {n: float(abs(freud_orbit[n].u - series.evaluate(n, freud_params.gamma, prec))) * n**2.5
           for n in range(50, 226)}
    first, second = _window_max(err, 50, 100), _window_max(err, 100, 225)
    ok = math.isfinite(first) and math.isfinite(second) and second <= first
    record("A6", ok, f"max n^(5/2)|u_n - u_asym| on [50,100] = {first:.5f}, on [100,225] = {second:.5f}")


@pytest.mark.slow
def test_A7_tracking_p_minf(freud_orbit, freud_params):
    plus, minus = u_asymptotic("pminf", 1, 3), u_asymptotic("pminf", -1, 3)
    prec = freud_params.precision_bits
    err = {}
    for m in range(50, 225):
        n = -m
        series = minus if n % 2 == 0 else plus
        err[m] = float(abs(freud_orbit[n].u - series.evaluate(n, freud_params.gamma, prec))) * m**2.5
    first, second = _window_max(err, 50, 100), _window_max(err, 100, 224)
    ok = math.isfinite(first) and math.isfinite(second) and second <= first
    record("A7", ok, f"max |n|^(5/2)|u_n - u_asym| on [-100,-50] = {first:.5f}, on [-224,-100] = {second:.5f}")


@pytest.mark.slow
def test_A8_alpha_point_tracking(freud_orbit):
    d = dict(track_alpha_points(freud_orbit, "forward"))
    D = dict(track_alpha_points(freud_orbit, "backward"))
    small = d[100] < 0.01 and D[-100] < 0.01
    decreasing = all(d[n + 1] < d[n] for n in range(100, 225)) and all(D[n - 1] < D[n] for n in range(-100, -224, -1))
    record("A8", small and decreasing,
           f"d_100 = {float(d[100]):.4f}, D_-100 = {float(D[-100]):.4f} (tol 0.01); decreasing beyond |n|=100: {decreasing}")


@pytest.mark.slow
def test_A9_x_expansion_residual(freud_orbit, freud_params):
    prec = freud_params.precision_bits
    scaled = {n: n * float(abs(freud_orbit[n].x - x_asymptotic(n, freud_params, prec))) for n in range(50, 226)}
    # calibrated bound: sup <= 1 and no growth between the halves of the window
    early, late = _window_max(scaled, 50, 137), _window_max(scaled, 138, 225)
    ok = all(math.isfinite(v) for v in scaled.values()) and max(early, late) <= 1 and late <= early
    record("A9", ok, f"max n|x_n - x_asym| on [50,137] = {early:.5f}, on [138,225] = {late:.5f} (bound 1)")


_exact_failures = []
_nonzero = st.fractions(min_value=-30, max_value=30, max_denominator=60).filter(lambda v: v != 0)
_positive = st.fractions(min_value=Fraction(1, 10), max_value=10, max_denominator=20)


@settings(max_examples=200, deadline=None)
@given(_nonzero, _nonzero, st.integers(-80, 80), _positive, _positive)
def _exact_properties(x, y, n, r, N):
    params = Params(r, N)
    s = PlaneState(x, y)
    image = dp1_forward(s, n, params)
    if image.y != 0 and dp1_inverse(image, n, params) != s:
        _exact_failures.append(("forward/inverse", s, n))
    pre = dp1_inverse(s, n, params)
    if pre.x != 0 and dp1_forward(pre, n, params) != s:
        _exact_failures.append(("inverse/forward", s, n))
    sfu = to_sfu(s, n, params)
    if from_sfu(sfu, params) != (s, Fraction(n) / N):
        _exact_failures.append(("sfu round trip", s, n))
    if image.x != 0 and sfu.u + sfu.f != 1 and sfu_step(sfu, params) != to_sfu(image, n + 1, params):
        _exact_failures.append(("conjugacy", s, n))
    if y != 1 and sfu_step(SfuState(x, y, Fraction(0)), params).u != 0:
        _exact_failures.append(("u=0 invariance", s, n))
    ap = AutonomousParams(Fraction(n) / N, r)
    if qrt_vertical_partner(s, ap) != alpha_dp1_step(s, ap):
        _exact_failures.append(("vertical partner", s, n))
    if x not in (1,):
        orbit = period3_orbit(x)
        if any(sfu_step(orbit[k], params) != orbit[(k + 1) % 3] for k in range(3)):
            _exact_failures.append(("period-3", x))


def test_A10_structural_exactness():
    _exact_failures.clear()
    _exact_properties()
    p2 = (SfuState(Fraction(2), Fraction(0), Fraction(0)), SfuState(Fraction(0), Fraction(2), Fraction(0)))
    one = Params(1, 1)
    period2_ok = sfu_step(p2[0], one) == p2[1] and sfu_step(p2[1], one) == p2[0]
    ap = AutonomousParams(Fraction(-2), Fraction(1))
    a, b = alpha_period2(ap)
    period2_ok = period2_ok and alpha_dp1_step(a, ap) == b and alpha_dp1_step(b, ap) == a
    ap = AutonomousParams(Fraction(1), Fraction(1))
    state = PlaneState(BigReal(Fraction(1, 2), 256), BigReal(Fraction(1, 3), 256))
    i0 = qrt_invariant(state, ap)
    drift = BigReal(0, 256)
    for _ in range(1000):
        state = alpha_dp1_step(state, ap)
        drift = max(drift, abs(qrt_invariant(state, ap) - i0) / abs(i0))
    ok = not _exact_failures and period2_ok and drift <= Fraction(1, 1000)
    record("A10", ok, f"exact property failures: {len(_exact_failures)}; period-2 ok: {period2_ok}; "
                      f"QRT relative drift over 1000 steps at 256 bits: {float(drift):.1e} (tol 1e-3)")


def test_A11_confinement_pattern():
    params = Params(1, 1, precision_bits=512)
    recs = confinement_signature(BigReal(1, 512), BigReal(Fraction(1, 10**6), 512), 5, params)
    x = [float(r.plane.x) for r in recs]
    near_100 = max(abs(float(v - w)) for v, w in zip(recs[1].sfu, (1, 0, 0)))
    near_010 = max(abs(float(v - w)) for v, w in zip(recs[2].sfu, (0, 1, 0)))
    ok = (abs(x[1] / 5e6 - 1) < 1e-3 and abs(x[2] / -5e6 - 1) < 1e-3 and abs(x[3]) < 1e-4
          and 1e-3 < abs(x[4]) < 1e3 and near_100 < 1e-5 and near_010 < 1e-5)
    record("A11", ok, f"x_6..x_9 = {x[1]:.6g}, {x[2]:.6g}, {x[3]:.2e}, {x[4]:.4g}; "
                      f"sfu distance to (1,0,0) {near_100:.1e}, to (0,1,0) {near_010:.1e}")
