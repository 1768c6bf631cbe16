import numpy as np
import pytest

from henon_atlas.mapcore import HenonMap, PolyNonlinearity
from henon_atlas.presets import get_preset


@pytest.fixture
def lorenz_map():
    return get_preset("lorenz-z2").at(-1.1, 0.85)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def quad_map(A, B, C):
    return HenonMap(A, B, C, PolyNonlinearity({(0, 2): -1.0}))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
