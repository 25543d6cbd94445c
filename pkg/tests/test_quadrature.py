import math

import numpy as np
import pytest

from pgdlab.quadrature import AccuracyError, integrate


def test_polynomial_exact():
    val, err = integrate(lambda s: np.vstack([s ** 5, np.ones_like(s)]), [0.0, 2.0])
    np.testing.assert_allclose(val, [64 / 6, 2.0], rtol=1e-14)
    assert np.all(err >= 0)


def test_gaussian_with_breakpoints():
    f = lambda s: np.exp(-0.5 * (s / 1e-3) ** 2)[None, :]  # noqa: E731
    val, _ = integrate(f, [-1.0, 0.0, 1.0])
    assert val[0] == pytest.approx(1e-3 * math.sqrt(2 * math.pi), rel=1e-10)


def test_panel_budget_exhausted():
    f = lambda s: (np.sign(np.sin(1e4 * s)))[None, :]  # noqa: E731
    with pytest.raises(AccuracyError):
        integrate(f, [0.0, 1.0], abs_tol=1e-15, rel_tol=1e-15, max_panels=20)
