import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pgdlab import (BreakdownError, SampledProfile, breakdown_time, classical_solution,
                    solve_implicit_s0, velocity_uhat)


def test_constant_velocity():
    prof = SampledProfile(lambda s: 0.8, lambda s: 1.0, window=(-10.0, 10.0))
    for t, x in [(0.0, 1.0), (1.0, 2.0), (5.0, -1.0)]:
        assert solve_implicit_s0(prof, t, x).s0 == pytest.approx(x - 0.8 * t, abs=1e-13)


def test_affine(affine):
    sol = solve_implicit_s0(affine, 0.5, 1.0)
    assert sol.s0 == pytest.approx(2.0, rel=1e-13)
    assert sol.jacobian == pytest.approx(0.5, rel=1e-8)
    assert classical_solution(affine, 0.5, 1.0) == pytest.approx(-2.0, rel=1e-13)


def test_sine_fixed_point(sine):
    sol = solve_implicit_s0(sine, 0.5, 0.0)
    assert sol.s0 == 0.0 and sol.iterations == 0


def test_initial_time(sine):
    assert classical_solution(sine, 0.0, 0.7) == math.sin(0.7)


def test_matches_small_sigma_fields(sine):
    assert velocity_uhat(sine, 1e-3, 0.3, 0.5) == pytest.approx(classical_solution(sine, 0.3, 0.5),
                                                              abs=1e-2)


def test_breakdown_times(affine, sine):
    assert breakdown_time(affine) == pytest.approx(1.0, rel=1e-9)
    assert breakdown_time(sine) == pytest.approx(1.0, rel=1e-4)
    assert breakdown_time(SampledProfile(np.tanh, lambda s: 1.0, window=(-5, 5))) == math.inf


def test_beyond_breakdown(sine):
    with pytest.raises(BreakdownError):
        solve_implicit_s0(sine, 1.5, 0.0)


@settings(max_examples=50)
@given(st.floats(0.0, 0.95), st.floats(-10.0, 10.0))
def test_residual_and_round_trip(t, x):
    sine = SampledProfile(np.sin, lambda s: 1.0, window=(-20.0, 20.0))
    sol = solve_implicit_s0(sine, t, x, t_star=1.0)
    assert abs(math.sin(sol.s0) * t + sol.s0 - x) < 1e-12
    assert sol.jacobian > 0
