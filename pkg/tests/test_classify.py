import math

import numpy as np
import pytest

from logic.classify import best_shift, classify, inner_ball_margin, outer_ball_margin, se_margins
from logic.function import PolyhedralConvexFunction, add_constant
from logic.geometry import box
from tests.helpers import abs_function


def test_abs_is_in_every_class(abs_fn):
    tags = classify(abs_fn)
    assert tags.is_cvx0 and tags.is_even and tags.zero_in_int_dom
    assert tags.integrable == "finite"
    assert tags.in_Se and tags.in_S1 and tags.in_S1c and tags.in_S2
    assert tags.witness_t == pytest.approx(0.0, abs=1e-9)
    assert tags.john is not None
    assert tags.john.center == pytest.approx([0.0])


def test_positive_value_at_origin_is_not_cvx0(abs_fn):
    tags = classify(add_constant(abs_fn, 1.0))
    assert not tags.is_cvx0
    assert not (tags.in_Se or tags.in_S1 or tags.in_S1c or tags.in_S2)


def test_flat_abs_fails_se_but_not_s1():
    tags = classify(abs_function(0.5))
    assert not tags.in_Se
    assert tags.se_margins[1] == pytest.approx(-1.0)
    assert tags.in_S1 and tags.in_S1c


def test_lopsided_function_has_short_level_set():
    phi = PolyhedralConvexFunction(1, [[1.0], [-2.0]], [0.0, 0.0])
    tags = classify(phi, with_john=False)
    assert tags.is_cvx0 and not tags.is_even
    assert not tags.in_Se
    assert not tags.in_S1
    assert tags.john is None


def test_infinite_mass_is_tagged():
    tags = classify(PolyhedralConvexFunction(1, [[1.0], [0.0]], [0.0, 0.0]), with_john=False)
    assert tags.integrable == "infinite"
    assert not tags.in_S1c


def test_margins_of_a_box():
    K = box([-2.0, -1.0], [2.0, 1.0])
    assert inner_ball_margin(K, np.zeros(2), 0.5) == pytest.approx(0.5)
    assert outer_ball_margin(K, 3.0) == pytest.approx(3.0 - math.sqrt(5.0))
    assert se_margins(K) == pytest.approx([1.0 - 1.0 / math.sqrt(2.0), 1.0 - math.sqrt(5.0)])


def test_best_shift_moves_the_ball_toward_room():
    K = box([-0.5, -2.0], [3.0, 2.0])
    t, margin = best_shift(K, 2.0)
    # room along e_1 is [-0.5, 3]; a unit ball fits best centered at 1.25
    assert t == pytest.approx(1.25, abs=1e-7)
    assert margin == pytest.approx(0.75, abs=1e-7)


def test_s2_does_not_require_a_centered_function():
    phi = PolyhedralConvexFunction(1, [[1.0], [-1.5]], [0.0, 0.0])
    tags = classify(phi, with_john=False)
    # G(2) = [-4/3, 2]: the unit ball fits best around 1/3 and G(2) touches 2B
    assert tags.witness_t_general == pytest.approx(1.0 / 3.0, abs=1e-7)
    assert tags.s2_margins == pytest.approx([2.0 / 3.0, 0.0], abs=1e-7)
    assert tags.in_S2
    assert not tags.centered
    assert not tags.in_S1c


def test_abs_is_tagged_centered(abs_fn):
    assert classify(abs_fn, with_john=False).centered
