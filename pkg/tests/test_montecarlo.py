import math

import numpy as np
import pytest

from pgdlab import (RiemannData, SampledProfile, SmoothedRiemannData, VacuumError, bootstrap_se,
                    estimate_rho, estimate_uhat, fields, simulate)
from pgdlab.montecarlo import BLOCK, effective_sigma


def flat(v=0.7, c=2.0):
    return SampledProfile(lambda s: v, lambda s: c, window=(-1.0, 1.0))


def test_zero_noise_is_transport():
    ens = simulate(flat(), 0.0, 1.5, 1000, seed=3)
    np.testing.assert_array_equal(ens.X, ens.s + 0.7 * 1.5)
    assert ens.mass == pytest.approx(4.0)


def test_displacement_variance():
    sigma, t, n = 0.3, 2.0, 200_000
    ens = simulate(flat(), sigma, t, n, seed=1)
    d = ens.X - ens.s - ens.u * t
    var = d.var(ddof=1)
    se = sigma ** 2 * t * math.sqrt(2.0 / (n - 1))
    assert abs(var - sigma ** 2 * t) < 5 * se
    assert abs(d.mean()) < 5 * sigma * math.sqrt(t / n)


def test_same_seed_same_ensemble():
    a = simulate(flat(), 0.2, 1.0, 3 * BLOCK + 17, seed=9)
    b = simulate(flat(), 0.2, 1.0, 3 * BLOCK + 17, seed=9, workers=3)
    np.testing.assert_array_equal(a.X, b.X)
    c = simulate(flat(), 0.2, 1.0, 3 * BLOCK + 17, seed=10)
    assert not np.array_equal(a.X, c.X)


def test_euler_steps_match_exact_distribution():
    exact = simulate(flat(), 0.5, 1.0, 100_000, seed=4).X
    euler = simulate(flat(), 0.5, 1.0, 100_000, seed=4, euler_steps=8).X
    assert abs(exact.std() - euler.std()) < 0.01
    assert abs(exact.mean() - euler.mean()) < 0.01


def test_constant_velocity_estimate():
    ens = simulate(flat(), 0.1, 1.0, 50_000, seed=2)
    for h in (0.01, 0.05, 0.2):
        assert estimate_uhat(ens, 0.7, h) == pytest.approx(0.7, rel=1e-14)


def test_constant_density_estimate():
    ens = simulate(flat(), 0.05, 1.0, 200_000, seed=2)
    rho = estimate_rho(ens, 0.7, 0.05)
    se, _ = bootstrap_se(ens, 0.7, 0.05, seed=1)
    assert abs(rho - 2.0) < 0.02
    assert se > 0


def test_importance_sampling_matches_stratified():
    prof = SmoothedRiemannData(RiemannData(1.0, 1.0, 0.0, -1.0, 0.0), 0.1).profile()
    a = simulate(prof, 0.1, 1.0, 200_000, seed=5, window=(-4.0, 4.0))
    b = simulate(prof, 0.1, 1.0, 200_000, seed=5, window=(-4.0, 4.0), sampling="importance")
    assert estimate_rho(a, -0.5, 0.05) == pytest.approx(estimate_rho(b, -0.5, 0.05), rel=0.03)
    assert a.w.sum() == pytest.approx(b.w.sum(), rel=1e-3)


def test_vacuum_estimate_raises():
    ens = simulate(flat(), 0.0, 1.0, 1000, seed=0)
    with pytest.raises(VacuumError):
        estimate_uhat(ens, 50.0, 0.01)


def test_export(tmp_path):
    ens = simulate(flat(), 0.1, 1.0, 10, seed=0)
    ens.export(tmp_path / "p.txt")
    back = np.loadtxt(tmp_path / "p.txt")
    np.testing.assert_array_equal(back[:, 2], ens.X)


@pytest.mark.parametrize("kw", [dict(n=0), dict(sigma=-1.0), dict(sampling="grid"),
                                dict(euler_steps=0)])
def test_invalid_arguments(kw):
    args = dict(sigma=0.1, t=1.0, n=10, seed=0) | kw
    with pytest.raises(ValueError):
        simulate(flat(), **args)


@pytest.fixture(scope="module")
def converging_ensemble():
    prof = SmoothedRiemannData(RiemannData(1.0, 1.0, 1.0, -1.0, 0.0), 0.05).profile()
    return prof, simulate(prof, 0.05, 1.0, 1_000_000, seed=2024, window=(-5.0, 5.0))


def test_velocity_against_quadrature(converging_ensemble):
    prof, ens = converging_ensemble
    h, x = 0.01, 0.5
    ref = fields(prof.restricted(-5.0, 5.0), effective_sigma(0.05, 1.0, h), 1.0, x)[1]
    _, se = bootstrap_se(ens, x, h, seed=3)
    assert abs(estimate_uhat(ens, x, h) - ref) <= 3 * se


@pytest.fixture(scope="module")
def sharp_ensembles():
    overlap = SmoothedRiemannData(RiemannData(1.0, 1.0, 0.0, -1.0, 0.0), 1e-4).profile()
    rare = SmoothedRiemannData(RiemannData(1.0, 1.0, 1.0, 1.0, 0.0), 1e-4).profile()
    return (simulate(overlap, 1e-3, 1.0, 1_000_000, seed=7, window=(-4.0, 4.0)),
            simulate(rare, 1e-3, 1.0, 1_000_000, seed=7, window=(-4.0, 4.0)))


def test_overlap_plateau_estimates(sharp_ensembles):
    ens, _ = sharp_ensembles
    assert estimate_uhat(ens, -0.5, 0.01) == pytest.approx(-2.0 / 3.0, abs=0.05)
    se, _ = bootstrap_se(ens, -0.5, 0.01, seed=1)
    assert abs(estimate_rho(ens, -0.5, 0.01) - 3.0) < max(4 * se, 0.05)


def test_rarefaction_vacuum_estimate(sharp_ensembles):
    _, ens = sharp_ensembles
    assert estimate_rho(ens, 1.5, 0.01) < 0.05
