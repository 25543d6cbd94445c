import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pgdlab import RiemannData, check_lax, eval_sticky, shock_mass, solve_sticky, verify_jump_ode
from pgdlab.riemann_sticky import (generalized_rh, jump_roots, material_window_balance)


def test_speed(overlap):
    sol = solve_sticky(overlap)
    assert sol.speed == pytest.approx(-2.0 + math.sqrt(2.0), abs=1e-15)
    assert sol.sign_choice == "plus"


def test_burgers_speed():
    assert solve_sticky(RiemannData(1.0, 0.0, 1.0, -1.0, 0.0)).speed == pytest.approx(0.5, abs=1e-15)


@pytest.mark.parametrize("a", [0.5, 1.0, 3.0])
def test_symmetric_collision(a):
    assert solve_sticky(RiemannData(1.0, 0.0, a, -2 * a, 0.0)).speed == pytest.approx(0.0, abs=1e-15)


def test_mass(overlap):
    sol = solve_sticky(overlap)
    assert shock_mass(sol, 1.0) == pytest.approx(math.sqrt(2.0), rel=1e-15)
    assert shock_mass(sol, 0.0) == 0.0
    assert shock_mass(solve_sticky(RiemannData(1.0, 0.0, 1.0, -1.0, 0.0)), 2.0) == 2.0


def test_ode_residual(overlap):
    ts = np.linspace(0.0, 5.0, 51)
    assert verify_jump_ode(solve_sticky(overlap), ts) < 1e-12
    wrong = solve_sticky(overlap, branch="minus")
    assert verify_jump_ode(wrong, ts) < 1e-12
    assert not check_lax(overlap, wrong.speed)
    assert verify_jump_ode(solve_sticky(RiemannData(1.0, 0.0, 1.0, -1.0, 0.0)), ts) < 1e-12


def test_check_lax(overlap):
    assert check_lax(overlap, -2.0 + math.sqrt(2.0))
    assert not check_lax(overlap, -2.0 - math.sqrt(2.0))
    assert check_lax(RiemannData(1.0, 0.0, 1.0, -1.0, 0.0), 0.5)
    with pytest.raises(ValueError):
        check_lax(RiemannData(1.0, 1.0, 0.0, 1.0, 0.0), 0.5)


def test_rejects_diverging_data():
    with pytest.raises(ValueError):
        solve_sticky(RiemannData(1.0, 1.0, 0.0, 1.0, 0.0))


converging = st.builds(
    lambda f1, r, u1, u2: RiemannData(f1, (r - 1.0) * f1, u1, u2, 0.0),
    st.floats(0.05, 5.0), st.floats(0.05, 20.0), st.floats(-3.0, 3.0), st.floats(-5.0, -0.01))


@given(converging)
def test_unique_admissible_root(data):
    roots = jump_roots(data)
    assert sum(check_lax(data, v) for v in roots.values()) == 1
    sol = solve_sticky(data)
    assert shock_mass(sol, 1.0) >= 0
    res = generalized_rh(sol).relative()
    assert abs(res.mass) < 1e-12 and abs(res.momentum) < 1e-12


@given(converging, st.floats(0.1, 5.0))
def test_material_window_conserves(data, t):
    sol = solve_sticky(data)
    (m1, m0), (p1, p0) = material_window_balance(sol, t, 1.0 + abs(data.u2) * t)
    assert m1 == pytest.approx(m0, rel=1e-12)
    assert p1 == pytest.approx(p0, rel=1e-12, abs=1e-12)


def test_generalized_rh_sign(overlap):
    sol = solve_sticky(overlap)
    res = generalized_rh(sol)
    assert res.mass == pytest.approx(0.0, abs=1e-15)
    assert res.momentum == pytest.approx(0.0, abs=1e-15)


def test_eval_sticky(overlap):
    c = solve_sticky(overlap).speed
    assert eval_sticky(overlap, 1.0, c - 0.1).rho == 1.0
    assert eval_sticky(overlap, 1.0, c + 0.1).u == -1.0
    on = eval_sticky(overlap, 2.0, 2 * c)
    assert on.u == c and on.rho == 1.5
    # diverging data never collide
    assert eval_sticky(RiemannData(1, 1, 1, 1), 1.0, 1.5).u == 1.5


def test_json(overlap):
    d = json.loads(solve_sticky(overlap).to_json())
    assert d["speed"] == pytest.approx(-0.5857864376269049)
