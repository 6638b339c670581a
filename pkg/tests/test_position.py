import numpy as np
import pytest

from logic.classify import classify
from logic.exceptions import NotCentered, NotEven
from logic.families import family_function
from logic.function import PolyhedralConvexFunction, add_constant, compose_linear
from logic.measure import exp_integral, product
from logic.position import householder, normalize_centered, normalize_even, normalize_general
from models.search_models import FamilySpec
from tests.helpers import abs_function


@pytest.fixture
def centered_fn() -> PolyhedralConvexFunction:
    """Asymmetric geometric function on [-2, 2] whose centroid is the origin."""
    spec = FamilySpec(symmetry="centered", knots=2, domain_radius=2.0)
    return family_function(spec, [1.0, 1.0, 0.5, 2.0])


def test_householder_maps_vector_to_first_axis():
    c = np.array([0.3, -0.4])
    O = householder(c)
    np.testing.assert_allclose(O @ c, [0.5, 0.0], atol=1e-12)
    np.testing.assert_allclose(O @ O.T, np.eye(2), atol=1e-12)
    np.testing.assert_allclose(householder(np.array([2.0, 0.0])), np.eye(2))


def test_normalize_even_in_one_dimension():
    cert, result = normalize_even(abs_function(2.0))
    assert cert.target_class == "S_e"
    assert result.equals(abs_function(1.0), tol=1e-8)
    assert classify(result, with_john=False).in_Se


def test_normalize_even_rectangle_level_set_is_diagonal():
    phi = PolyhedralConvexFunction(2, [[1, 0], [-1, 0], [0, 2], [0, -2]], np.zeros(4))  # max(|x|, 2|y|)
    cert, _ = normalize_even(phi)
    T = np.asarray(cert.linear)
    assert abs(T[0, 1]) < 1e-4 and abs(T[1, 0]) < 1e-4
    assert T[1, 1] / T[0, 0] == pytest.approx(2.0, rel=1e-3)


def test_normalize_even_stretched_hexagon(hexagon_gauge):
    phi = compose_linear(hexagon_gauge, np.diag([0.5, 2.0]))
    cert, result = normalize_even(phi)
    tags = classify(result, with_john=False)
    assert tags.in_Se
    assert min(cert.margins) > 1e-3
    assert not cert.near_boundary
    assert product(result, "A", with_tags=False).product == pytest.approx(
        product(phi, "A", with_tags=False).product, rel=1e-6)


def test_normalize_even_rejects_asymmetric_function():
    with pytest.raises(NotEven):
        normalize_even(PolyhedralConvexFunction(1, [[1.0], [-2.0]], [0.0, 0.0]))


def test_family_member_is_centered(centered_fn):
    assert exp_integral(centered_fn).centroid == pytest.approx([0.0], abs=1e-9)
    assert centered_fn.is_geometric()
    assert not centered_fn.is_even()


def test_normalize_centered_lands_in_s1c(centered_fn):
    cert, result = normalize_centered(centered_fn)
    assert cert.target_class == "S_1c"
    assert 0.0 <= cert.witness_t <= 1.0
    assert min(cert.margins) > 0.0
    tags = classify(result, with_john=False)
    assert tags.in_S1 and tags.in_S1c
    assert product(result, "A", with_tags=False).product == pytest.approx(
        product(centered_fn, "A", with_tags=False).product, rel=1e-6)


def test_normalize_centered_requires_centroid_at_origin():
    with pytest.raises(NotCentered):
        normalize_centered(PolyhedralConvexFunction(1, [[1.0], [-2.0]], [0.0, 0.0]))


def test_normalize_general_shifts_to_zero_infimum(centered_fn):
    phi = add_constant(centered_fn, 0.5)
    cert, result = normalize_general(phi)
    assert cert.target_class == "S_2"
    assert cert.vshift == pytest.approx(0.5)
    assert result.infimum == pytest.approx(0.0, abs=1e-12)
    assert classify(result, with_john=False).in_S2
    assert product(result, "L", with_tags=False).product == pytest.approx(
        product(phi, "L", with_tags=False).product, rel=1e-6)
