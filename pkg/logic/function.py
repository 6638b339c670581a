import math
from functools import cached_property
from typing import Any, Dict, Literal, Optional, Sequence

import numpy as np

from logic.exceptions import DimensionMismatch, EmptyLevelSet, EmptyPolyhedron, IllPositioned, ImproperInput, \
    NonConvexMin
from logic.geometry import sphere_directions
from logic.polyhedron import Polyhedron
from models.function_models import AffinePiece, FunctionModel
from utils.config import settings


CombineOp = Literal["min", "max", "meet"]
Reference = Literal["quadratic", "euclidean-norm", "table"]


class PolyhedralConvexFunction:
    """
    Closed proper convex function x -> max_i <slope_i, x> + intercept_i on a polyhedral domain,
    +inf outside the domain. The epigraph in R^{n+1} is built on first use.
    """

    def __init__(self, n: int, slopes, intercepts, domain: Optional[Polyhedron] = None,
                 meta: Optional[Dict[str, Any]] = None, tol: Optional[float] = None):
        self.n = int(n)
        self.tol = settings.TOL if tol is None else tol
        slopes = np.asarray(slopes, dtype=float).reshape(-1, self.n)
        intercepts = np.asarray(intercepts, dtype=float).reshape(-1)
        if len(slopes) != len(intercepts):
            raise ImproperInput(f"{len(slopes)} slopes but {len(intercepts)} intercepts.")
        if not (np.all(np.isfinite(slopes)) and np.all(np.isfinite(intercepts))):
            raise ImproperInput("Affine pieces must have finite entries.")
        if domain is None:
            domain = Polyhedron.whole_space(self.n)
        if domain.dim != self.n:
            raise DimensionMismatch(f"Domain of dimension {domain.dim} for a function on R^{self.n}.")
        if len(slopes) == 0:
            if not domain.is_bounded:
                raise ImproperInput("A function without pieces needs a bounded domain.")
            slopes = np.zeros((1, self.n))
            intercepts = np.zeros(1)
        slopes.setflags(write=False)
        intercepts.setflags(write=False)
        self.slopes = slopes
        self.intercepts = intercepts
        self.domain = domain
        self.meta = dict(meta or {})

    # --- serialization ---

    @classmethod
    def from_model(cls, model: FunctionModel) -> 'PolyhedralConvexFunction':
        domain = None if model.domain == "all" else Polyhedron.from_model(model.domain)
        try:
            if domain is not None:
                domain.vrep
            return cls(model.n, [p.slope for p in model.pieces], [p.intercept for p in model.pieces],
                       domain=domain, meta=model.meta)
        except EmptyPolyhedron as e:
            raise ImproperInput(f"Empty domain: {e}") from e

    def to_model(self) -> FunctionModel:
        domain = "all" if len(self.domain.b) == 0 else self.domain.to_model()
        return FunctionModel(
            n=self.n,
            pieces=[AffinePiece(slope=s.tolist(), intercept=float(c)) for s, c in zip(self.slopes, self.intercepts)],
            domain=domain,
            meta=self.meta
        )

    # --- epigraph ---

    @cached_property
    def epigraph(self) -> Polyhedron:
        A_dom, b_dom = self.domain.hrep
        A = np.vstack([
            np.hstack([A_dom, np.zeros((len(b_dom), 1))]),
            np.hstack([self.slopes, -np.ones((len(self.intercepts), 1))])
        ])
        b = np.concatenate([b_dom, -self.intercepts])
        return Polyhedron.from_hrep(A, b, dim=self.n + 1, tol=self.tol)

    # --- evaluation ---

    def evaluate(self, x) -> float:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if not self.domain.contains_point(x, self.tol):
            return math.inf
        return float(np.max(self.slopes @ x + self.intercepts))

    def evaluate_many(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float).reshape(-1, self.n)
        values = (X @ self.slopes.T + self.intercepts).max(axis=1)
        A, b = self.domain.hrep
        if len(b):
            scale = np.maximum(1.0, np.abs(X).max(axis=1))
            inside = np.all(X @ A.T <= b + self.tol * scale[:, None], axis=1)
            values = np.where(inside, values, np.inf)
        return values

    def __call__(self, x) -> float:
        return self.evaluate(x)

    @cached_property
    def infimum(self) -> float:
        """inf of the function: -inf when a recession direction of the epigraph descends."""
        E = self.epigraph
        if len(E.rays) and np.any(E.rays[:, -1] < -self.tol):
            return -math.inf
        return float(E.vertices[:, -1].min())

    def level_set(self, s: float) -> Polyhedron:
        """Sub-level set {x : phi(x) <= s} as an exact polyhedron."""
        inf = self.infimum
        if s < inf - self.tol * max(1.0, abs(inf) if math.isfinite(inf) else 1.0):
            raise EmptyLevelSet(f"Level {s} is below the infimum {inf}.")
        A_dom, b_dom = self.domain.hrep
        A = np.vstack([A_dom, self.slopes])
        b = np.concatenate([b_dom, s - self.intercepts])
        return Polyhedron.from_hrep(A, b, dim=self.n, tol=self.tol)

    # --- predicates ---

    def is_geometric(self) -> bool:
        """Membership in Cvx_0: nonnegative and vanishing at the origin."""
        value = self.evaluate(np.zeros(self.n))
        return math.isfinite(value) and abs(value) <= self.tol and self.infimum >= -self.tol

    def zero_in_int_dom(self) -> bool:
        if len(self.domain.b) == 0:
            return True
        return self.domain.is_full_dim and float(np.min(self.domain.slack(np.zeros(self.n)))) > self.tol

    def reflected(self) -> 'PolyhedralConvexFunction':
        """x -> phi(-x)."""
        return compose_linear(self, -np.eye(self.n))

    def is_even(self) -> bool:
        flip = np.diag(np.r_[-np.ones(self.n), 1.0])
        return self.epigraph.equals(self.epigraph.linear_image(flip))

    def equals(self, other: 'PolyhedralConvexFunction', tol: Optional[float] = None) -> bool:
        """Canonical equality: the epigraphs coincide."""
        if other.n != self.n:
            return False
        return self.epigraph.equals(other.epigraph, tol)

    def canonical(self) -> 'PolyhedralConvexFunction':
        """Same function with an irredundant piece list."""
        return from_epigraph(self.epigraph.canonical(), meta=self.meta)

    def __repr__(self) -> str:
        name = self.meta.get("name", "")
        return f"PolyhedralConvexFunction(n={self.n}, pieces={len(self.intercepts)}{', ' + name if name else ''})"


# --- constructors ---

def from_epigraph(P: Polyhedron, meta: Optional[Dict[str, Any]] = None) -> PolyhedralConvexFunction:
    """
    Rebuild a function from a polyhedron in R^{n+1} that is closed upward in the last coordinate.

    Rows (a, alpha) . (x, t) <= beta with alpha < 0 become pieces, rows with alpha = 0 become domain
    constraints.

    Raises:
        ImproperInput: a row bounds t from above, or nothing bounds it from below.
    """
    n = P.dim - 1
    A, b = P.hrep
    alpha = A[:, -1]
    tol = P.tol
    if np.any(alpha > tol):
        raise ImproperInput("Polyhedron is not an epigraph: a constraint bounds the last coordinate from above.")
    piece = alpha < -tol
    if not piece.any():
        raise ImproperInput("Polyhedron is not the epigraph of a proper function.")
    slopes = -A[piece, :n] / alpha[piece, None]
    intercepts = b[piece] / alpha[piece]
    dom_rows = ~piece
    domain = Polyhedron.from_hrep(A[dom_rows, :n], b[dom_rows], dim=n, tol=tol) if dom_rows.any() else None
    return PolyhedralConvexFunction(n, slopes, intercepts, domain=domain, meta=meta, tol=tol)


def indicator(K: Polyhedron, meta: Optional[Dict[str, Any]] = None) -> PolyhedralConvexFunction:
    """I_K: 0 on K, +inf outside."""
    return PolyhedralConvexFunction(K.dim, np.zeros((1, K.dim)), np.zeros(1), domain=K,
                                    meta=meta or {"name": "indicator"})


def gauge_of(K: Polyhedron, meta: Optional[Dict[str, Any]] = None) -> PolyhedralConvexFunction:
    """Minkowski gauge of K, which must contain the origin in its interior."""
    A, b = K.hrep
    if not K.is_full_dim or (len(b) and b.min() <= K.tol):
        raise IllPositioned("Gauge needs the origin in the interior of K.")
    slopes = A / b[:, None]
    intercepts = np.zeros(len(b))
    if not K.is_bounded:
        slopes = np.vstack([slopes, np.zeros((1, K.dim))])
        intercepts = np.zeros(len(slopes))
    return PolyhedralConvexFunction(K.dim, slopes, intercepts, meta=meta or {"name": "gauge"})


def compose_linear(phi: PolyhedralConvexFunction, M) -> PolyhedralConvexFunction:
    """x -> phi(M x) for invertible M."""
    M = np.asarray(M, dtype=float).reshape(phi.n, phi.n)
    domain = phi.domain.linear_image(np.linalg.inv(M))
    return PolyhedralConvexFunction(phi.n, phi.slopes @ M, phi.intercepts, domain=domain, meta=phi.meta, tol=phi.tol)


def add_constant(phi: PolyhedralConvexFunction, c: float) -> PolyhedralConvexFunction:
    return PolyhedralConvexFunction(phi.n, phi.slopes, phi.intercepts + c, domain=phi.domain, meta=phi.meta,
                                    tol=phi.tol)


def combine(phi: PolyhedralConvexFunction, psi: PolyhedralConvexFunction, op: CombineOp) -> PolyhedralConvexFunction:
    """
    Pointwise max, pointwise min, or their convex meet.

    max: union of pieces on the intersection of domains.
    min: convex hull of the two epigraphs, accepted only when it equals their union.
    meet: the convex hull itself, the largest convex minorant of the min.
    """
    if phi.n != psi.n:
        raise DimensionMismatch(f"Cannot combine functions on R^{phi.n} and R^{psi.n}.")
    meta = {"name": f"{phi.meta.get('name', 'phi')} {op} {psi.meta.get('name', 'psi')}"}
    if op == "max":
        try:
            domain = phi.domain.intersect(psi.domain)
            domain.vrep
        except EmptyPolyhedron as e:
            raise ImproperInput("Domains do not intersect; the max is identically +inf.") from e
        return PolyhedralConvexFunction(phi.n, np.vstack([phi.slopes, psi.slopes]),
                                        np.concatenate([phi.intercepts, psi.intercepts]), domain=domain, meta=meta)

    E1, E2 = phi.epigraph, psi.epigraph
    hull = Polyhedron.from_vrep(np.vstack([E1.vertices, E2.vertices]), np.vstack([E1.rays, E2.rays]),
                                dim=phi.n + 1, tol=phi.tol)
    if op == "min":
        # hull minus E1 must lie in E2; checked facet by facet of E1
        A, b = E1.hrep
        for a_j, b_j in zip(A, b):
            if hull.support(a_j) <= b_j + phi.tol * max(1.0, abs(b_j)):
                continue
            outside = hull.with_halfspaces(-a_j, -b_j)
            if not E2.contains(outside):
                raise NonConvexMin("The pointwise minimum is not convex.")
    return from_epigraph(hull, meta=meta)


def approximate(reference: Reference, pieces: int, radius: float, n: int = 1, q: float = 1.0,
                table: Optional[Sequence[Sequence[float]]] = None) -> PolyhedralConvexFunction:
    """
    Polyhedral approximant of a reference function.

    The quadratic and euclidean-norm references give minorants built from tangent planes, so the result
    is at most the reference. A table gives the interpolant through its samples, which is a majorant of
    every convex function through those samples on the sampled interval and is +inf outside it.

    Args:
        reference: "quadratic" for q|x|^2/2, "euclidean-norm" for |x|, "table" for 1D samples.
        pieces: Number m of equal grid cells of [-radius, radius]; tangency points are the m + 1 grid nodes
            (and 0). When n > 1 the per-axis cell count is m^(1/n) rounded up to an even number.
        radius: Tangency points lie in [-radius, radius]^n.
        n: Dimension.
        q: Curvature of the quadratic.
        table: (x, y) samples of a convex 1D function for "table".

    Returns:
        The approximant. Quadratic tangency grids always include 0, so the result is geometric, and the
        grid for 2m cells contains the grid for m, so doubling m only adds tangent planes.
    """
    if pieces < 2 or radius <= 0:
        raise ValueError("approximate needs at least 2 pieces and a positive radius.")
    if reference == "quadratic":
        if n == 1:
            points = np.unique(np.r_[np.linspace(-radius, radius, pieces + 1), 0.0])[:, None]
        else:
            g = int(math.ceil(pieces ** (1.0 / n)))
            g += g % 2
            axis = np.linspace(-radius, radius, g + 1)
            points = np.stack(np.meshgrid(*([axis] * n), indexing='ij'), axis=-1).reshape(-1, n)
        slopes = q * points
        intercepts = -0.5 * q * (points ** 2).sum(axis=1)
        meta = {"name": f"quadratic m={pieces} R={radius}", "q": q}
        return PolyhedralConvexFunction(n, slopes, intercepts, meta=meta)
    if reference == "euclidean-norm":
        directions = sphere_directions(n, pieces)
        return PolyhedralConvexFunction(n, directions, np.zeros(len(directions)),
                                        meta={"name": f"euclidean-norm m={len(directions)}"})
    if reference == "table":
        return _from_table(table)
    raise ValueError(f"Unknown reference {reference}.")


def _from_table(table) -> PolyhedralConvexFunction:
    data = np.asarray(table, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2 or len(data) < 2:
        raise ValueError("A sample table is a list of at least two (x, y) rows.")
    data = data[np.argsort(data[:, 0])]
    x, y = data[:, 0], data[:, 1]
    if np.any(np.diff(x) <= 0):
        raise ImproperInput("Sample abscissae must be distinct.")
    slopes = np.diff(y) / np.diff(x)
    if np.any(np.diff(slopes) < -settings.TOL * max(1.0, np.abs(slopes).max())):
        raise ImproperInput("Sample table is not convex.")
    intercepts = y[1:] - slopes * x[1:]
    domain = Polyhedron.from_hrep([[1.0], [-1.0]], [x[-1], -x[0]], dim=1)
    return PolyhedralConvexFunction(1, slopes[:, None], intercepts, domain=domain, meta={"name": "table"})
