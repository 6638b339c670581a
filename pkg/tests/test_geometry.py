import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from logic.exceptions import DegenerateBody, UnboundedInput
from logic.geometry import (ball_polytope, box, hausdorff_distance, mahler_product, moment, polar,
                            sphere_directions, volume)
from logic.john import john_ellipsoid
from logic.polyhedron import Polyhedron
from tests.helpers import hexagon

CROSS = Polyhedron.from_vrep([[1, 0], [-1, 0], [0, 1], [0, -1]])


def test_polar_of_square_is_cross_polytope(square):
    assert polar(square).equals(CROSS)


def test_polar_of_half_line():
    p = Polyhedron.from_hrep([[-1.0]], [1.0])
    np.testing.assert_allclose(polar(p).vertices, [[-1.0], [0.0]], atol=1e-12)


def test_polar_of_line_is_lower_dimensional():
    line = Polyhedron.from_hrep([[1.0, 0.0], [-1.0, 0.0]], [0.0, 0.0])
    q = polar(line)
    assert q.affine_dim == 1
    assert q.contains_point([7.0, 0.0])
    assert not q.contains_point([0.0, 0.5])


@given(st.floats(0.5, 3.0), st.floats(0.5, 3.0), st.floats(0.5, 3.0), st.floats(0.5, 3.0))
def test_bipolar_of_box(a, b, c, d):
    p = box([-a, -b], [c, d])
    assert polar(polar(p)).equals(p, tol=1e-8)


def test_volumes(square):
    assert volume(square) == pytest.approx(4.0)
    assert volume(CROSS) == pytest.approx(2.0)
    assert volume(Polyhedron.from_hrep([[-1.0, 0.0]], [0.0])) == math.inf
    flat = Polyhedron.from_vrep([[0.0, 0.0], [1.0, 0.0]])
    assert volume(flat) == 0.0


def test_simplex_volume_matches_determinant():
    rng = np.random.default_rng(7)
    V = rng.normal(size=(4, 3))
    expected = abs(np.linalg.det(V[1:] - V[0])) / 6.0
    assert volume(Polyhedron.from_vrep(V)) == pytest.approx(expected, rel=1e-9)


def test_moment_of_box():
    np.testing.assert_allclose(moment(box([0.0, 0.0], [1.0, 2.0])), [1.0, 2.0], atol=1e-12)
    np.testing.assert_allclose(moment(box([0.0], [1.0])), [0.5])


def test_moment_of_unbounded_set_raises():
    with pytest.raises(UnboundedInput):
        moment(Polyhedron.from_hrep([[-1.0]], [0.0]))


def test_hausdorff_distance_of_intervals():
    assert hausdorff_distance(box([0.0], [1.0]), box([0.0], [2.0])) == pytest.approx(1.0)
    assert hausdorff_distance(box([0.0, 0.0], [1.0, 1.0]), box([0.0, 0.0], [1.0, 1.0])) == pytest.approx(0.0)


def test_mahler_product_of_square(square):
    assert mahler_product(square) == pytest.approx(8.0)


def test_mahler_product_needs_origin_inside():
    with pytest.raises(DegenerateBody):
        mahler_product(box([0.0, 0.0], [1.0, 1.0]))


def test_ball_polytope_radii():
    P = ball_polytope(2, 8)
    assert len(P.vertices) == 8
    assert P.max_norm() == pytest.approx(1.0 / math.cos(math.pi / 8))
    assert volume(ball_polytope(2, 4)) == pytest.approx(4.0)


def test_sphere_directions_are_unit():
    for n, count in ((1, 2), (2, 12), (3, 40)):
        U = sphere_directions(n, count)
        np.testing.assert_allclose(np.linalg.norm(U, axis=1), 1.0)


def test_john_ellipsoid_of_interval_is_exact():
    E = john_ellipsoid(box([-1.0], [3.0]))
    assert E.center == pytest.approx([1.0])
    assert E.shape[0][0] == pytest.approx(4.0)


def test_john_ellipsoid_of_rectangle_is_axis_aligned():
    E = john_ellipsoid(box([-1.0, -0.5], [1.0, 0.5]))
    np.testing.assert_allclose(E.center, [0.0, 0.0], atol=1e-4)
    np.testing.assert_allclose(E.shape_matrix, np.diag([1.0, 0.25]), atol=1e-3)


def test_john_ellipsoid_sandwich_for_hexagon():
    K = hexagon()
    E = john_ellipsoid(K)
    # inscribed: every facet keeps nonnegative room
    reach = np.linalg.norm(K.A @ E.root, axis=1)
    assert np.all(K.b - K.A @ E.center_vector - reach >= -1e-9)
    assert max(E.gauge(v) for v in K.vertices) <= 2.0


def test_john_ellipsoid_rejects_unbounded_and_flat_bodies():
    with pytest.raises(UnboundedInput):
        john_ellipsoid(Polyhedron.from_hrep([[-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]], [0.0, 1.0, 1.0]))
    with pytest.raises(DegenerateBody):
        john_ellipsoid(Polyhedron.from_vrep([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]))
