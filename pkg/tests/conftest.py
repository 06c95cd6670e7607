import numpy as np
import pytest
from hypothesis import settings

from polyfock.grid import make_phase_grid, make_time_grid
from polyfock.rng import generator

settings.register_profile("polyfock", max_examples=25, deadline=None)
settings.load_profile("polyfock")


@pytest.fixture(scope="session")
def tg():
    return make_time_grid(8.0, 4096)


@pytest.fixture(scope="session")
def pg():
    return make_phase_grid(6.0, 256)


@pytest.fixture(scope="session")
def small_pg():
    return make_phase_grid(4.0, 96)


@pytest.fixture
def rng():
    return generator(1234, "tests")


def disk(phase, r):
    return np.abs(phase.z) <= r
