"""Shared fixtures.  High-precision orbits are computed once per session."""
from __future__ import annotations

import pytest

from dp1lab.diagnostics import iterate_orbit
from dp1lab.lewquarles import lq_solve
from dp1lab.numerics import Params, digits_to_bits

FREUD_DIGITS = 1200
FREUD_NC = 800
N_MIN, N_MAX = -224, 225

ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def freud_params() -> Params:
    return Params(1, 1, precision_bits=digits_to_bits(FREUD_DIGITS), contraction_count=FREUD_NC)


@pytest.fixture(scope="session")
def freud_state(freud_params):
    return lq_solve(0, None, FREUD_NC, freud_params)


@pytest.fixture(scope="session")
def freud_orbit(freud_state, freud_params):
    return iterate_orbit(freud_state.seed(), 1, N_MIN, N_MAX, freud_params, "freud")


@pytest.fixture(scope="session")
def lq_orbit_cache(freud_params):
    """xi0, Nc -> orbit over [1, 225]; shared by the slope and turnaround checks."""
    cache = {}

    def get(xi0, nc):
        key = (xi0, nc)
        if key not in cache:
            state = lq_solve(xi0, None, nc, freud_params)
            cache[key] = iterate_orbit(state.seed(), 1, 1, N_MAX, freud_params, f"lq({xi0})")
        return cache[key]

    return get


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: int(k[1:])):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"{key} {'PASS' if ok else 'FAIL'}  {detail}")
