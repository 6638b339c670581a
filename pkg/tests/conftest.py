import os

import pytest
from hypothesis import settings

from logic.function import PolyhedralConvexFunction, gauge_of, indicator
from logic.geometry import box
from logic.polyhedron import Polyhedron
from tests.helpers import abs_function, hexagon

settings.register_profile("dev", deadline=None, max_examples=100)
settings.register_profile("acceptance", deadline=None, max_examples=1000)
settings.load_profile(os.getenv("CVXLAB_TEST_PROFILE", "dev"))


@pytest.fixture
def abs_fn() -> PolyhedralConvexFunction:
    return abs_function()


@pytest.fixture
def interval_indicator() -> PolyhedralConvexFunction:
    return indicator(box([-1.0], [1.0]))


@pytest.fixture
def square() -> Polyhedron:
    return box([-1.0, -1.0], [1.0, 1.0])


@pytest.fixture
def square_gauge(square) -> PolyhedralConvexFunction:
    return gauge_of(square)


@pytest.fixture
def hexagon_gauge() -> PolyhedralConvexFunction:
    return gauge_of(hexagon())
