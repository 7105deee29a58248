import math

import numpy as np
import pytest

from obmlc import kernels
from obmlc.core import ConstellationConfig

DEFAULT_GRID_DB = list(range(-10, 21))


@pytest.fixture
def config():
    return ConstellationConfig()  # E_i = 1, A = sqrt(2)


@pytest.fixture(params=sorted(kernels.backends()))
def backend(request):
    return kernels.backends()[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def gamma_of(db):
    return 10.0 ** (db / 10.0)


def sigma_of(db, mean_energy=1.0):
    return math.sqrt(mean_energy / gamma_of(db))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
