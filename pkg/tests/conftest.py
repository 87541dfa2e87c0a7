import pytest

from ptrosen.grid import make_grid, make_grid_2d
from ptrosen.potential import PotentialParams


@pytest.fixture(scope="session")
def g20():
    return make_grid(20.0, 512)


@pytest.fixture(scope="session")
def g15_2d():
    return make_grid_2d(15.0, 256)


@pytest.fixture
def fig1():
    return PotentialParams(0.75, 0.8)
