import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from logic.exceptions import IllPositioned, NotCentered, NotIntegrable
from logic.function import PolyhedralConvexFunction, add_constant, approximate, compose_linear, gauge_of, indicator
from logic.geometry import box, mahler_product, polar, volume
from logic.measure import ball_volume, centroid, exp_integral, fradelizi_check, product, reference_constants
from logic.transforms import apply
from tests.helpers import abs_function, even_polygon, hexagon, lattice_points


def test_mass_of_abs(abs_fn):
    mass = exp_integral(abs_fn)
    assert mass.is_finite
    assert mass.value == pytest.approx(2.0, rel=1e-9)
    assert mass.centroid == pytest.approx([0.0], abs=1e-12)


def test_mass_of_shifted_indicator():
    mass = exp_integral(indicator(box([0.0], [1.0])))
    assert mass.value == pytest.approx(1.0)
    assert centroid(indicator(box([0.0], [1.0])), mass) == pytest.approx([0.5])


def test_mass_of_planar_gauge_is_factorial_times_volume(square, square_gauge, hexagon_gauge):
    assert exp_integral(square_gauge).value == pytest.approx(2.0 * volume(square), rel=1e-9)
    assert exp_integral(hexagon_gauge).value == pytest.approx(2.0 * volume(hexagon()), rel=1e-9)


def test_mass_of_hinge_and_asymmetric_centroid():
    phi = PolyhedralConvexFunction(1, [[1.0], [-2.0]], [0.0, 0.0])  # x on the right, 2|x| on the left
    mass = exp_integral(phi)
    assert mass.value == pytest.approx(1.5)
    # int x e^-x over x > 0 is 1, int x e^{2x} over x < 0 is -1/4
    assert mass.centroid == pytest.approx([0.75 / 1.5])


def test_mass_trichotomy():
    assert exp_integral(PolyhedralConvexFunction(1, [[0.0]], [0.0])).kind == "infinite"
    flat = indicator(box([0.0, 0.0], [1.0, 0.0]))
    assert exp_integral(flat).kind == "zero"
    with pytest.raises(NotIntegrable):
        centroid(flat)


def test_quadratic_approximant_mass_tends_to_gaussian():
    phi = approximate("quadratic", 65, 6.0)
    assert exp_integral(phi).value == pytest.approx(math.sqrt(2.0 * math.pi), rel=1e-2)


@pytest.mark.parametrize("c", [0.5, 1.0, 2.0])
def test_products_of_scaled_abs(c):
    phi = abs_function(c)
    assert product(phi, "L").product == pytest.approx(4.0, rel=1e-9)
    assert product(phi, "A").product == pytest.approx(4.0, rel=1e-9)
    assert product(phi, "J").product == pytest.approx(1.0, rel=1e-9)


def test_product_of_abs_plus_constant_under_legendre():
    assert product(add_constant(abs_function(), 0.7), "L").product == pytest.approx(4.0, rel=1e-9)


def test_polarity_product_of_indicator_is_mahler_product(square):
    report = product(indicator(square), "A")
    assert report.product == pytest.approx(mahler_product(square), rel=1e-9)


def test_gauge_quotient_of_indicator(square):
    assert product(indicator(square), "J").product == pytest.approx(0.5, rel=1e-9)


def test_product_report_records_bounds_and_references(abs_fn):
    report = product(abs_fn, "L")
    assert report.tags is not None and report.tags.is_even
    santalo = next(c for c in report.bounds_check if c.name == "santalo_upper")
    assert santalo.applicable and santalo.passed
    assert report.reference == reference_constants(1)
    assert report.ratios["gaussian_L"] == pytest.approx(4.0 / (2.0 * math.pi))


def test_product_is_undefined_when_a_mass_is_infinite():
    report = product(PolyhedralConvexFunction(1, [[1.0], [0.0]], [0.0, 0.0]), "A")
    assert report.mass_primal.kind == "infinite"
    assert report.product is None
    assert not report.is_defined


def test_product_needs_origin_inside_the_domain():
    with pytest.raises(IllPositioned):
        product(indicator(box([0.0], [1.0])), "L")
    with pytest.raises(IllPositioned):
        product(add_constant(abs_function(), 1.0), "A")


def test_santalo_bound_holds_for_even_planar_gauge(hexagon_gauge):
    report = product(hexagon_gauge, "L", with_tags=False)
    assert report.product <= (2.0 * math.pi) ** 2


def test_ball_volume():
    assert ball_volume(1) == pytest.approx(2.0)
    assert ball_volume(2) == pytest.approx(math.pi)
    assert ball_volume(3) == pytest.approx(4.0 * math.pi / 3.0)


def test_fradelizi_on_centered_function(abs_fn):
    assert fradelizi_check(abs_fn)
    with pytest.raises(NotCentered):
        fradelizi_check(PolyhedralConvexFunction(1, [[1.0], [-2.0]], [0.0, 0.0]))


def test_legendre_product_of_quadratic_approximants_climbs_to_two_pi():
    values = [product(approximate("quadratic", m, 6.0), "L", with_tags=False).product for m in (8, 16, 32, 64, 128)]
    assert all(b > a for a, b in zip(values, values[1:]))
    assert values[-1] >= 0.98 * 2.0 * math.pi
    assert max(values) <= 2.0 * math.pi * (1.0 + 1e-6)


def test_planar_quadratic_approximant_splits_into_axes():
    # a product grid of tangency points gives the sum of two one-dimensional approximants
    planar = product(approximate("quadratic", 256, 4.0, n=2), "L", with_tags=False).product
    line = product(approximate("quadratic", 16, 4.0), "L", with_tags=False).product
    assert planar == pytest.approx(line ** 2, rel=1e-8)
    assert 0.95 * (2.0 * math.pi) ** 2 <= planar <= (2.0 * math.pi) ** 2 * (1.0 + 1e-6)


def test_mass_of_cube_gauge_is_factorial_times_volume():
    cube = box([-1.0, -1.0, -1.0], [1.0, 1.0, 1.0])
    assert exp_integral(gauge_of(cube)).value == pytest.approx(6.0 * 8.0, rel=1e-9)
    octahedron = polar(cube)
    assert exp_integral(gauge_of(octahedron)).value == pytest.approx(6.0 * 4.0 / 3.0, rel=1e-9)


@pytest.mark.parametrize("slopes", [
    [[1.0, 0.0], [-1.0, 0.0]],
    [[1.0, 1.0], [-1.0, -1.0]],
])
def test_even_function_with_infinite_mass_has_null_polar_mass(slopes):
    phi = PolyhedralConvexFunction(2, slopes, [0.0, 0.0])
    assert phi.is_even()
    assert exp_integral(phi).kind == "infinite"
    assert exp_integral(apply(phi, "A")).kind == "zero"


def linear_maps():
    entry = st.floats(-2.0, 2.0, allow_nan=False)
    return st.tuples(entry, entry, entry, entry).map(lambda e: np.array(e).reshape(2, 2))


@given(lattice_points(), linear_maps(), st.floats(-2.0, 2.0))
def test_products_are_invariant_under_linear_maps_and_shifts(points, T, shift):
    K = even_polygon(points)
    assume(K is not None)
    assume(abs(np.linalg.det(T)) >= 0.25)
    phi = gauge_of(K)
    moved = compose_linear(phi, T)

    polar_mass = exp_integral(apply(phi, "A"))
    assert polar_mass.kind == "finite" and polar_mass.value > 0
    reference_A = product(phi, "A", with_tags=False).product
    assert product(moved, "A", with_tags=False).product == pytest.approx(reference_A, rel=1e-6)

    reference_L = product(phi, "L", with_tags=False).product
    assert product(add_constant(moved, shift), "L", with_tags=False).product == pytest.approx(reference_L, rel=1e-6)
