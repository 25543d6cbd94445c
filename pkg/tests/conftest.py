import numpy as np
import pytest

from pgdlab import RiemannData, SampledProfile


@pytest.fixture
def overlap():
    return RiemannData(1.0, 1.0, 0.0, -1.0, 0.0)


@pytest.fixture
def rarefaction():
    return RiemannData(1.0, 1.0, 1.0, 1.0, 0.0)


@pytest.fixture
def affine():
    """f0 = 1, u0 = -s: every Gaussian kernel integral is exact."""
    return SampledProfile(lambda s: -np.asarray(s, dtype=float), lambda s: 1.0,
                          window=(-60.0, 60.0))


@pytest.fixture
def sine():
    return SampledProfile(np.sin, lambda s: 1.0, window=(-20.0, 20.0))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n].line())
