from typing import Optional

import numpy as np
from hypothesis import strategies as st

from logic.function import PolyhedralConvexFunction
from logic.geometry import sphere_directions
from logic.polyhedron import Polyhedron


def abs_function(c: float = 1.0, shift: float = 0.0) -> PolyhedralConvexFunction:
    """c|x| + shift on the real line."""
    return PolyhedralConvexFunction(1, [[c], [-c]], [shift, shift], meta={"name": f"{c}|x|"})


def hexagon() -> Polyhedron:
    """Regular hexagon with inradius 1."""
    return Polyhedron.from_hrep(sphere_directions(2, 6), np.ones(6), dim=2)


def even_polygon(points) -> Optional[Polyhedron]:
    """conv(+-p) for integer points p, or None when the hull is flat."""
    P = np.asarray(points, dtype=float)
    V = np.vstack([P, -P])
    if np.linalg.matrix_rank(V) < 2:
        return None
    return Polyhedron.from_vrep(V)


def lattice_points(bound: int = 4, min_size: int = 2, max_size: int = 4):
    coord = st.integers(min_value=-bound, max_value=bound)
    return st.lists(st.tuples(coord, coord), min_size=min_size, max_size=max_size, unique=True)
