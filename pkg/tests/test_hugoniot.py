import dataclasses
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pgdlab import RiemannData, check_fan, rh_residuals, solve_free
from pgdlab.hugoniot import JumpStates, State, lax_entropy


def test_overlap_left_jump():
    res = rh_residuals(JumpStates(State(1.0, 0.0, 0.0), State(3.0, -2 / 3, 2 / 3), -1.0))
    assert res.mass == pytest.approx(0.0, abs=1e-15)
    assert abs(res.momentum) > 0.1
    assert res.momentum_with_p == pytest.approx(0.0, abs=1e-15)


@given(st.floats(0, 5), st.floats(-3, 3), st.floats(0, 2), st.floats(-5, 5))
def test_identical_states(rho, u, p, D):
    s = State(rho, u, p)
    assert rh_residuals(JumpStates(s, s, D))[:3] == (0.0, 0.0, 0.0)


def test_contact_balances():
    res = rh_residuals(JumpStates(State(1.0, 0.4), State(2.5, 0.4), 0.4))
    assert res[:3] == pytest.approx((0.0, 0.0, 0.0), abs=1e-15)


def test_rarefaction_fan_passes(rarefaction):
    rep = check_fan(solve_free(rarefaction))
    assert rep.passed and rep.passed_without_p
    for row in rep.rows:
        assert row.residuals[:3] == (0.0, 0.0, 0.0)


def test_overlap_fan_needs_pressure(overlap):
    rep = check_fan(solve_free(overlap))
    assert rep.passed
    assert not rep.passed_without_p
    assert [r.residuals.momentum for r in rep.rows] == pytest.approx([2 / 3, -2 / 3], rel=1e-14)
    # the free streams cross both jumps, so the Lax inequalities fail
    assert not any(r.lax for r in rep.rows)


def test_perturbed_plateau_fails(overlap):
    fan = solve_free(overlap)
    states = list(fan.states)
    states[1] = dataclasses.replace(states[1], rho=3.1)
    assert not check_fan(dataclasses.replace(fan, states=tuple(states))).passed


@given(st.floats(0.05, 5), st.floats(0.01, 20), st.floats(-3, 3), st.floats(-5, -0.01))
def test_every_overlap_fan_passes_with_pressure(f1, r, u1, u2):
    rep = check_fan(solve_free(RiemannData(f1, (r - 1) * f1, u1, u2, 0.0)))
    assert rep.passed


def test_lax_entropy():
    assert lax_entropy(JumpStates(State(1, 1), State(1, 0), 0.5))
    assert not lax_entropy(JumpStates(State(1, 0), State(1, 1), 0.5))


def test_report_json(overlap):
    rows = json.loads(check_fan(solve_free(overlap)).to_json())
    assert len(rows) == 2 and all(r["pass"] for r in rows)


def test_negative_density_rejected():
    with pytest.raises(ValueError):
        JumpStates(State(-1.0, 0.0), State(1.0, 0.0), 0.0)
