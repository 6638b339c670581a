import asyncio
import itertools
import logging
import math
from typing import List, NamedTuple, Optional, Tuple

import numpy as np
from scipy.optimize import minimize

import constants
from logic.batcher import EvaluationBatcher
from logic.exceptions import CvxLabError, TooManyParameters
from logic.families import centered_values, centering_scale, default_params, family_function, family_values, \
    knot_abscissae, split_params
from logic.function import PolyhedralConvexFunction, from_epigraph
from logic.geometry import ball_polytope
from logic.measure import product
from logic.polyhedron import Polyhedron
from logic.position import normalize_centered, normalize_even, normalize_general
from models.position_models import Normalization
from models.search_models import FamilySpec, Objective, OracleRecord, SearchConfig, SearchResult
from utils.concurrency import create_chunks
from utils.config import settings

logger = logging.getLogger(__name__)

MAX_ORACLE_PARAMS = 5


class _Evaluation(NamedTuple):
    signed: float
    normalization: Optional[Normalization]
    function: Optional[PolyhedralConvexFunction]


class _LocalResult(NamedTuple):
    restart: int
    params: Tuple[float, ...]
    signed: float
    history: List[float]


def _sign(objective: Objective) -> float:
    return 1.0 if objective.direction == "max" else -1.0


def _normalizer(spec: FamilySpec, objective: Objective):
    if objective.functional == "L":
        return normalize_general
    return normalize_even if spec.symmetry == "even" else normalize_centered


def _evaluate(params, spec: FamilySpec, objective: Objective) -> _Evaluation:
    infeasible = _Evaluation(constants.INFEASIBLE_SCORE, None, None)
    try:
        phi = family_function(spec, params)
    except CvxLabError as e:
        logger.debug(f"Rejected parameters {np.round(params, 6).tolist()}: {e}")
        return infeasible
    try:
        cert, normalized = _normalizer(spec, objective)(phi)
        report = product(normalized, objective.functional, with_tags=False)
    except CvxLabError as e:
        logger.debug(f"Infeasible family member: {e}")
        return infeasible
    if report.product is None:
        return infeasible
    return _Evaluation(_sign(objective) * report.product, cert, normalized)


def evaluate_objective(params, spec: FamilySpec, objective: Objective) -> float:
    """
    Signed objective of one family member: the product of its normalized form, negated for minimization.

    Non-convex parameters and members outside the functional's domain score constants.INFEASIBLE_SCORE.
    """
    return _evaluate(params, spec, objective).signed


def _start(spec: FamilySpec, seed_seq: np.random.SeedSequence, restart: int) -> np.ndarray:
    x0 = default_params(spec)
    if restart == 0:
        return x0
    rng = np.random.default_rng(seed_seq)
    return x0 * rng.uniform(0.25, 2.0, size=len(x0))


def _local_search(restart: int, x0: np.ndarray, spec: FamilySpec, objective: Objective,
                  config: SearchConfig) -> _LocalResult:
    evaluated: List[Tuple[float, Tuple[float, ...]]] = []

    def loss(p: np.ndarray) -> float:
        signed = evaluate_objective(p, spec, objective)
        evaluated.append((signed, tuple(float(v) for v in p)))
        return -signed

    bounds = [(0.0, None)] * len(x0)
    if not spec.anchor_origin:
        bounds[0] = (None, None)
    minimize(loss, x0, method='Nelder-Mead', bounds=bounds,
             options={'maxiter': config.max_iters, 'xatol': 1e-10, 'fatol': 1e-12})

    history = []
    best = constants.INFEASIBLE_SCORE
    for signed, _ in evaluated:
        best = max(best, signed)
        if math.isfinite(best):
            history.append(best)
    signed, params = min(evaluated, key=lambda e: (-e[0], e[1]))
    logger.info(f"Restart {restart} finished: {len(evaluated)} evaluations, best signed value {signed:.9g}")
    return _LocalResult(restart, params, signed, history)


async def run_search_async(spec: FamilySpec, objective: Objective,
                           config: Optional[SearchConfig] = None) -> SearchResult:
    """
    Multi-start Nelder-Mead over the slope increments of a family, bounded below by zero.

    Restart 0 starts from the x^2/2 interpolant, the others from seeded random rescalings of it.
    Restarts run in worker threads and are reduced by (value, then lexicographic parameters).
    """
    config = SearchConfig() if config is None else config
    seed_seq = np.random.SeedSequence(config.seed)
    children = seed_seq.spawn(config.restarts)
    starts = [(i, _start(spec, child, i)) for i, child in enumerate(children)]

    outcomes: List[_LocalResult] = []
    for chunk in create_chunks(starts, settings.WORKERS):
        tasks = [asyncio.to_thread(_local_search, i, x0, spec, objective, config) for i, x0 in chunk]
        outcomes.extend(await asyncio.gather(*tasks))

    trace: List[float] = []
    running = constants.INFEASIBLE_SCORE
    for outcome in outcomes:
        for value in outcome.history:
            running = max(running, value)
            trace.append(_sign(objective) * running)
    best = min(outcomes, key=lambda o: (-o.signed, o.params))

    evaluation = _evaluate(best.params, spec, objective)
    value = _sign(objective) * best.signed if math.isfinite(best.signed) else None
    try:
        best_values = family_values(spec, best.params).tolist()
    except CvxLabError:
        best_values = []
    result = SearchResult(
        spec=spec,
        objective=objective,
        best_params=list(best.params),
        best_values=best_values,
        best_function=None if evaluation.function is None else evaluation.function.to_model(),
        normalization=evaluation.normalization,
        value=value,
        trace=trace,
        seed=config.seed,
        entropy=int(seed_seq.entropy)
    )
    if config.oracle and spec.param_count <= MAX_ORACLE_PARAMS:
        oracle = await brute_force_oracle_async(spec, objective, config.oracle_resolution, config.oracle_refine)
        if value is not None and oracle.oracle_value is not None:
            oracle.gap = abs(value - oracle.oracle_value)
        result.oracle = oracle
    return result


def run_search(spec: FamilySpec, objective: Objective, config: Optional[SearchConfig] = None) -> SearchResult:
    return asyncio.run(run_search_async(spec, objective, config))


# --- brute-force oracle: separate assembly through epigraph generators, no normalization ---

def _lattice(spec: FamilySpec, resolution: int) -> List[np.ndarray]:
    """Parameter vectors of the value lattice whose increments are nonnegative."""
    axis = np.linspace(0.0, spec.value_box, resolution)
    axes = [axis] * (spec.param_count - (0 if spec.anchor_origin else 1))
    if not spec.anchor_origin:
        axes = [np.linspace(-0.5 * spec.value_box, 0.5 * spec.value_box, resolution)] + axes
    h = spec.step
    points = []
    for coords in itertools.product(*axes):
        params = _params_from_values(spec, np.asarray(coords), h)
        if params is not None:
            points.append(params)
    return points


def _increments(rel_values: np.ndarray, h: float) -> np.ndarray:
    slopes = np.diff(np.r_[0.0, rel_values]) / h
    return np.diff(np.r_[0.0, slopes])


def _params_from_values(spec: FamilySpec, coords: np.ndarray, h: float) -> Optional[np.ndarray]:
    """Lattice coordinates (values relative to the origin value) to increments, None if any is negative."""
    k = spec.knots
    head = [] if spec.anchor_origin else [coords[0]]
    rel = coords if spec.anchor_origin else coords[1:]
    parts = [_increments(rel[:k], h)]
    if spec.symmetry == "centered":
        parts.append(_increments(rel[k:], h))
    increments = np.concatenate(parts)
    if np.any(increments < -1e-12):
        return None
    return np.r_[head, np.maximum(increments, 0.0)]


def _assemble(spec: FamilySpec, params: np.ndarray) -> PolyhedralConvexFunction:
    """Family member as the function of conv(knot points) + vertical and tail rays."""
    v0, right, left = split_params(spec, params)
    h = spec.step
    x = knot_abscissae(spec)
    if spec.symmetry == "centered":
        values = centered_values(spec, v0, right, left, centering_scale(spec, v0, right, left))
    else:
        values = v0 + h * np.r_[0.0, np.cumsum(np.cumsum(right))]

    if spec.parametrization == "radial":
        W = ball_polytope(2, spec.ball_facets).vertices
        points = np.vstack([np.column_stack([r * W, np.full(len(W), v)]) for r, v in zip(x, values)])
        rays = [[0.0, 0.0, 1.0]]
        if spec.extended:
            tail = (values[-1] - values[-2]) / h
            rays += [[w[0], w[1], tail] for w in W]
        return from_epigraph(Polyhedron.from_vrep(points, rays, dim=3))

    if spec.symmetry == "even":
        x = np.r_[-x[:0:-1], x]
        values = np.r_[values[:0:-1], values]
    points = np.column_stack([x, values])
    rays = [[0.0, 1.0]]
    if spec.extended:
        rays += [[1.0, (values[-1] - values[-2]) / h], [-1.0, -(values[1] - values[0]) / h]]
    return from_epigraph(Polyhedron.from_vrep(points, rays, dim=2))


def _oracle_value(spec: FamilySpec, objective: Objective, params: np.ndarray) -> float:
    report = product(_assemble(spec, params), objective.functional, with_tags=False)
    if report.product is None:
        return constants.INFEASIBLE_SCORE
    return _sign(objective) * report.product


def _coordinate_scale(spec: FamilySpec) -> np.ndarray:
    """Increment change matching one unit of value change; the free origin value moves one to one."""
    scale = np.full(spec.param_count, 1.0 / spec.step)
    if not spec.anchor_origin:
        scale[0] = 1.0
    return scale


def _pattern(spec: FamilySpec, center: np.ndarray, step: np.ndarray) -> List[np.ndarray]:
    """Every point center + step * o with o in {-1, 0, 1}^p, clipped to nonnegative increments."""
    offsets = np.array(list(itertools.product((-1.0, 0.0, 1.0), repeat=len(center))))
    lower = np.zeros(len(center))
    if not spec.anchor_origin:
        lower[0] = -np.inf
    candidates = np.unique(np.maximum(center + offsets * step, lower), axis=0)
    return [c for c in candidates if not np.array_equal(c, center)]


async def _refine(spec: FamilySpec, objective: Objective, center: np.ndarray, signed: float,
                  spacing: float) -> Tuple[np.ndarray, float, int, float, int]:
    """
    Pattern search from a lattice optimum: move to the best neighbour while it improves, else halve the step.

    Returns:
        (params, signed value, rounds, final step in value units, evaluations).
    """
    scale = _coordinate_scale(spec)
    rounds = evaluated = 0
    while spacing >= settings.ORACLE_MIN_STEP and rounds < settings.ORACLE_MAX_ROUNDS:
        rounds += 1
        async with EvaluationBatcher(lambda p: _oracle_value(spec, objective, p), settings.WORKERS) as batcher:
            for point in _pattern(spec, center, spacing * scale):
                await batcher.add(point)
        evaluated += len(batcher.results)
        params, value = batcher.best()
        if value > signed:
            center, signed = np.asarray(params), value
        else:
            spacing *= 0.5
    if spacing >= settings.ORACLE_MIN_STEP:
        logger.warning(f"Oracle refinement stopped after {rounds} rounds at step {spacing:.3e}.")
    return center, signed, rounds, spacing, evaluated


async def brute_force_oracle_async(spec: FamilySpec, objective: Objective, resolution: Optional[int] = None,
                                   refine: bool = True) -> OracleRecord:
    """
    Exhaustive scan of the value lattice [0, value_box]^p (origin value in [-box/2, box/2] when free),
    followed by a pattern search around the lattice optimum.

    The refinement starts at the lattice spacing and halves it until it drops below
    settings.ORACLE_MIN_STEP, so the reported value is a local optimum resolved far below the lattice.

    Returns:
        The optimum found; oracle_params are slope increments, comparable with SearchResult.best_params.

    Raises:
        TooManyParameters: more than five free parameters.
    """
    if spec.param_count > MAX_ORACLE_PARAMS:
        raise TooManyParameters(f"Oracle scans at most {MAX_ORACLE_PARAMS} parameters, got {spec.param_count}.")
    resolution = settings.ORACLE_RESOLUTION if resolution is None else resolution
    points = _lattice(spec, resolution)
    logger.info(f"Oracle scanning {len(points)} feasible lattice points.")
    async with EvaluationBatcher(lambda p: _oracle_value(spec, objective, p), settings.WORKERS) as batcher:
        for point in points:
            await batcher.add(point)
    params, signed = batcher.best()
    record = OracleRecord(oracle_params=list(params), evaluated=len(batcher.results))

    if refine and math.isfinite(signed):
        lattice_signed = signed
        center, signed, rounds, step, evaluated = await _refine(
            spec, objective, np.asarray(params), signed, spec.value_box / (resolution - 1))
        logger.info(f"Oracle refinement: {rounds} rounds, {evaluated} evaluations, "
                    f"value {lattice_signed:.9g} -> {signed:.9g}")
        record.oracle_params = center.tolist()
        record.evaluated += evaluated
        record.refine_rounds = rounds
        record.final_step = step
    record.oracle_value = _sign(objective) * signed if math.isfinite(signed) else None
    return record


def brute_force_oracle(spec: FamilySpec, objective: Objective, resolution: Optional[int] = None,
                       refine: bool = True) -> OracleRecord:
    return asyncio.run(brute_force_oracle_async(spec, objective, resolution, refine))


def truncated_gauge_shape(phi: PolyhedralConvexFunction, rel_tol: float = 0.05) -> bool:
    """
    Shape of a 1D truncated norm on the positive half-line: an optional zero plateau at 0, then a
    single slope (within rel_tol), then +inf past a finite domain end.
    """
    if phi.n != 1 or not phi.domain.is_bounded:
        return False
    right = float(phi.domain.vertices.max())
    if right <= 0:
        return False
    V = phi.canonical().epigraph.vertices
    x = np.unique(np.r_[0.0, V[:, 0][V[:, 0] > phi.tol], right])
    values = np.array([phi.evaluate(t) for t in x])
    slopes = np.diff(values) / np.diff(x)
    scale = max(1.0, float(np.abs(slopes).max()))
    flat = np.abs(slopes) <= phi.tol * scale
    # plateau first, then no more flat pieces
    rising = slopes[np.argmin(flat):] if not flat.all() else np.array([])
    if len(rising) == 0 or np.any(np.abs(rising) <= phi.tol * scale):
        return False
    if np.any(rising < 0):
        return False
    return bool(rising.max() <= (1.0 + rel_tol) * rising.min())
