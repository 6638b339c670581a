import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from logic.exceptions import NotGeometric
from logic.function import PolyhedralConvexFunction, add_constant, gauge_of, indicator
from logic.geometry import box
from logic.transforms import apply, gauge, legendre, level_set_comparison, polarity
from tests.helpers import abs_function, even_polygon, hexagon, lattice_points


def test_legendre_of_abs_is_interval_indicator(abs_fn, interval_indicator):
    assert legendre(abs_fn).equals(interval_indicator)


def test_legendre_of_interval_indicator_is_abs(abs_fn, interval_indicator):
    assert legendre(interval_indicator).equals(abs_fn)


def test_legendre_of_hinge():
    hinge = PolyhedralConvexFunction(1, [[0.0], [1.0]], [0.0, -1.0])  # max(0, x - 1)
    expected = PolyhedralConvexFunction(1, [[1.0]], [0.0], domain=box([0.0], [1.0]))  # y + I_[0,1]
    assert legendre(hinge).equals(expected)


def test_polarity_fixes_abs(abs_fn):
    assert polarity(abs_fn).equals(abs_fn)


@pytest.mark.parametrize("c", [0.5, 2.0, 3.0])
def test_polarity_and_gauge_of_scaled_abs(c):
    phi = abs_function(c)
    assert polarity(phi).equals(abs_function(1.0 / c))
    assert gauge(phi).equals(indicator(box([-1.0 / c], [1.0 / c])))


def test_polarity_swaps_indicator_and_polar_indicator(square):
    cross = polarity(indicator(square))
    assert cross([0.5, 0.5]) == pytest.approx(0.0)
    assert cross([0.6, 0.6]) == float("inf")


def test_gauge_maps_indicator_to_gauge(square, square_gauge):
    assert gauge(indicator(square)).equals(square_gauge)


def test_polarity_requires_geometric_function(abs_fn):
    with pytest.raises(NotGeometric):
        polarity(add_constant(abs_fn, 1.0))


def test_apply_dispatch(abs_fn):
    assert apply(abs_fn, "L").equals(legendre(abs_fn))
    with pytest.raises(ValueError):
        apply(abs_fn, "X")


def test_transforms_commute_on_hexagon_gauge(hexagon_gauge):
    J = gauge(hexagon_gauge)
    assert legendre(polarity(hexagon_gauge)).equals(J, tol=1e-8)
    assert polarity(legendre(hexagon_gauge)).equals(J, tol=1e-8)
    assert J.equals(indicator(hexagon()), tol=1e-8)


def piecewise_geometric():
    """Random geometric functions max(a|x| restricted, b x, -c x - d...) on the line, built from slopes."""
    slope = st.floats(0.25, 4.0)
    return st.tuples(slope, slope, slope, slope, st.floats(0.25, 2.0))


@given(piecewise_geometric())
def test_involutions_on_random_geometric_functions(params):
    a, b, c, d, kink = params
    # slopes a, a + b to the right of 0 (kink at `kink`), -c, -(c + d) to the left
    phi = PolyhedralConvexFunction(1, [[a], [a + b], [-c], [-(c + d)]], [0.0, -b * kink, 0.0, -d * kink])
    assert legendre(legendre(phi)).equals(phi, tol=1e-8)
    assert polarity(polarity(phi)).equals(phi, tol=1e-8)
    assert gauge(gauge(phi)).equals(phi, tol=1e-8)
    assert legendre(polarity(phi)).equals(polarity(legendre(phi)), tol=1e-8)


@given(lattice_points())
def test_involutions_on_random_even_polygon_gauges(points):
    K = even_polygon(points)
    assume(K is not None)
    phi = gauge_of(K)
    assert legendre(legendre(phi)).equals(phi, tol=1e-8)
    assert polarity(polarity(phi)).equals(phi, tol=1e-8)
    assert gauge(gauge(phi)).equals(phi, tol=1e-8)
    J = gauge(phi)
    assert legendre(polarity(phi)).equals(J, tol=1e-8)
    assert polarity(legendre(phi)).equals(J, tol=1e-8)


@settings(max_examples=15, deadline=None)
@given(st.floats(0.3, 3.0), st.floats(0.3, 3.0))
def test_polarity_reverses_order(small, extra):
    lower = abs_function(small)
    upper = abs_function(small + extra)
    grid = np.linspace(-3.0, 3.0, 13)
    A_lower, A_upper = polarity(lower), polarity(upper)
    for x in grid:
        assert A_upper(x) <= A_lower(x) + 1e-12


@pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
def test_level_set_comparison_on_hexagon_gauge(hexagon_gauge, s):
    record = level_set_comparison(hexagon_gauge, s)
    assert record.hausdorff <= 1e-9
    assert record.inner_margin >= -1e-9
    assert record.outer_margin >= -1e-9
