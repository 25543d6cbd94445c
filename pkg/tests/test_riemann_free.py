import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pgdlab import FanCase, RiemannData, eval_wavefan, overlap_plateau, solve_free, spurious_pressure


def test_rarefaction(rarefaction):
    fan = solve_free(rarefaction)
    assert fan.case is FanCase.RAREFACTION
    assert fan.loci == (1.0, 2.0)
    assert [s.rho for s in fan.states] == [1.0, 0.0, 2.0]
    for x, u in [(0.5, 1.0), (1.25, 1.25), (1.75, 1.75), (3.0, 2.0)]:
        assert eval_wavefan(fan, 1.0, x).u == u


def test_overlap(overlap):
    fan = solve_free(overlap)
    assert fan.case is FanCase.OVERLAP
    assert fan.loci == (-1.0, 0.0)
    mid = fan.states[1]
    assert mid.rho == 3.0
    assert mid.u == pytest.approx(-2.0 / 3.0, rel=1e-15)
    assert mid.p == pytest.approx(2.0 / 3.0, rel=1e-15)
    assert overlap_plateau(overlap) == mid


def test_tiny_u2_is_a_contact():
    fan = solve_free(RiemannData(1.0, 0.0, 1.0, 1e-300, 0.0))
    assert fan.case is FanCase.CONTACT


def test_contact():
    fan = solve_free(RiemannData(1.5, 0.5, 0.3, 0.0, 0.0))
    assert fan.case is FanCase.CONTACT
    assert fan.loci == (0.3,)
    assert [(s.rho, s.u) for s in fan.states] == [(1.5, 0.3), (2.0, 0.3)]


def test_values_on_loci(rarefaction, overlap):
    assert eval_wavefan(solve_free(rarefaction), 1.0, 1.0).rho == 0.5
    assert eval_wavefan(solve_free(overlap), 2.0, -2.0).rho == 2.0


def test_x0_shift():
    fan = solve_free(RiemannData(1.0, 1.0, 0.0, -1.0, 3.0))
    assert eval_wavefan(fan, 1.0, 2.5).rho == 3.0
    assert eval_wavefan(fan, 1.0, -0.5).rho == 1.0


@given(f1=st.floats(0.1, 5), f2=st.floats(-0.09, 5), u1=st.floats(-3, 3), u2=st.floats(-3, 3),
       xi=st.floats(-8, 8), t=st.floats(0.1, 10))
def test_self_similarity(f1, f2, u1, u2, xi, t):
    fan = solve_free(RiemannData(f1, f2, u1, u2, 0.0))
    a, b = eval_wavefan(fan, t, xi * t), eval_wavefan(fan, 2 * t, 2 * xi * t)
    assert (a.rho, a.p) == (b.rho, b.p)
    assert a.u == pytest.approx(b.u, rel=1e-15, abs=1e-15)
    assert a.rho >= 0 and a.p >= 0


@given(f1=st.floats(0.1, 5), f2=st.floats(-0.09, 5), u1=st.floats(-3, 3), u2=st.floats(0.01, 3))
def test_pressure_only_in_overlap(f1, f2, u1, u2):
    data = RiemannData(f1, f2, u1, u2, 0.0)
    for x in np.linspace(-10, 10, 21):
        assert spurious_pressure(data, 1.0, x) == 0.0


def test_spurious_pressure(overlap):
    assert spurious_pressure(overlap, 1.0, -0.5) == pytest.approx(2.0 / 3.0, rel=1e-15)
    assert spurious_pressure(overlap, 1.0, -2.0) == 0.0
    assert spurious_pressure(RiemannData(1.0, 0.0, 0.0, -1.0, 0.0), 1.0, -0.25) == 0.5


def test_eps_first_order_keeps_ramp_locus(rarefaction):
    fan = solve_free(rarefaction, eps_first=True)
    assert fan.loci == (1.0, 1.5, 2.0)
    assert fan.limit_order != solve_free(rarefaction).limit_order


def test_json(overlap):
    d = json.loads(solve_free(overlap).to_json())
    assert d["case"] == "overlap"
    assert solve_free(RiemannData(1, 1, 1, 1)).states[1].to_json()["u"] == "x/t"
    assert len(d["loci"]) == 2


def test_rejects_nonpositive_time(overlap):
    with pytest.raises(ValueError):
        eval_wavefan(solve_free(overlap), 0.0, 0.0)
