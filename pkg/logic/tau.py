import asyncio
import logging
import math
from typing import Dict, List, Optional, Sequence

import numpy as np

from logic.exceptions import CvxLabError, DimensionMismatch
from logic.function import PolyhedralConvexFunction
from logic.geometry import box, hausdorff_distance
from logic.integration import exp_integral
from logic.polyhedron import Polyhedron
from logic.transforms import apply
from models.measure_models import MassResult
from models.tau_models import ConvergenceReport, DiagnoseConfig, EpiDistanceProfile, TermRecord, Verdict
from utils.concurrency import create_chunks
from utils.config import settings

logger = logging.getLogger(__name__)


def _window_gap(p: Polyhedron, q: Polyhedron, radius: float) -> float:
    """Hausdorff distance of p and q cut to the cube [-radius, radius]^dim."""
    cube = box(-radius * np.ones(p.dim), radius * np.ones(p.dim))
    pw, qw = p.intersect(cube), q.intersect(cube)
    p_empty, q_empty = pw.is_empty(), qw.is_empty()
    if p_empty and q_empty:
        return 0.0
    if p_empty or q_empty:
        return math.inf
    return hausdorff_distance(pw, qw)


def epi_distance(phi: PolyhedralConvexFunction, psi: PolyhedralConvexFunction,
                 radii: Optional[Sequence[float]] = None) -> EpiDistanceProfile:
    """
    Truncated Hausdorff distances between epi(phi) and epi(psi), one per window radius R.

    Both epigraphs are cut to the cube [-R, R]^(n+1), not to the ball of radius R, before the distance
    is taken. The cube contains the ball, so a gap can show up at a radius where the ball would hide it.
    """
    if phi.n != psi.n:
        raise DimensionMismatch(f"Epi-distance between functions on R^{phi.n} and R^{psi.n}.")
    radii = settings.WINDOW_RADII if radii is None else list(radii)
    distances = [_window_gap(phi.epigraph, psi.epigraph, R) for R in radii]
    return EpiDistanceProfile(window_radii=radii, distances=distances)


def _mass_gap(a: MassResult, b: MassResult) -> float:
    if a.is_finite and b.is_finite:
        return abs(a.value - b.value)
    return 0.0 if a.kind == b.kind else math.inf


def _centroid_gap(a: MassResult, b: MassResult) -> float:
    if a.is_finite and b.is_finite:
        return float(np.linalg.norm(np.asarray(a.centroid) - np.asarray(b.centroid)))
    return 0.0 if a.kind == b.kind else math.inf


def _lattice(limit: PolyhedralConvexFunction, step: float, radius: float) -> np.ndarray:
    """Points of the step-spaced lattice in [-radius, radius]^n interior to dom(limit) with finite value."""
    axis = np.arange(-radius, radius + 0.5 * step, step)
    grid = np.stack(np.meshgrid(*([axis] * limit.n), indexing='ij'), axis=-1).reshape(-1, limit.n)
    A, b = limit.domain.hrep
    if len(b):
        grid = grid[np.all(grid @ A.T < b - limit.tol, axis=1)]
    return grid


class _Limit:
    """Everything about the limit function that every term is compared against, computed once."""

    def __init__(self, limit: PolyhedralConvexFunction, config: DiagnoseConfig):
        self.phi = limit
        self.mass = exp_integral(limit)
        self.lattice = _lattice(limit, config.lattice_step, config.lattice_radius)
        self.lattice_values = limit.evaluate_many(self.lattice)
        inf = limit.infimum
        self.levels = [t for t in config.levels if not abs(t - inf) <= config.level_margin and t > inf]
        self.skipped = [t for t in config.levels if t not in self.levels]
        self.level_sets = {t: limit.level_set(t) for t in self.levels}
        self.transforms: Dict[str, Optional[PolyhedralConvexFunction]] = {}
        for tag in config.transforms:
            try:
                self.transforms[tag] = apply(limit, tag)
            except CvxLabError as e:
                logger.warning(f"Limit has no {tag} transform: {e}")
                self.transforms[tag] = None


def _term_record(index: int, phi: PolyhedralConvexFunction, limit: _Limit, config: DiagnoseConfig) -> TermRecord:
    radii = config.radii
    r_max = radii[-1]
    level_gaps = {}
    for t, target in limit.level_sets.items():
        try:
            level_gaps[str(t)] = _window_gap(phi.level_set(t), target, r_max)
        except CvxLabError:
            level_gaps[str(t)] = math.inf

    pointwise = 0.0
    if len(limit.lattice):
        values = phi.evaluate_many(limit.lattice)
        pointwise = float(np.max(np.abs(values - limit.lattice_values)))

    mass = exp_integral(phi)
    transform_gaps = {}
    for tag, target in limit.transforms.items():
        try:
            image = apply(phi, tag)
        except CvxLabError as e:
            logger.debug(f"Term {index} has no {tag} transform: {e}")
            image = None
        if target is None and image is None:
            transform_gaps[tag] = 0.0
        elif target is None or image is None:
            transform_gaps[tag] = math.inf
        else:
            transform_gaps[tag] = epi_distance(image, target, radii).sup

    record = TermRecord(
        index=index,
        epi=epi_distance(phi, limit.phi, radii),
        level_gaps=level_gaps,
        pointwise_gap=pointwise,
        mass_gap=_mass_gap(mass, limit.mass),
        centroid_gap=_centroid_gap(mass, limit.mass),
        transform_gaps=transform_gaps
    )
    logger.debug(f"Term {index}: epi {record.epi.sup:.3e}, mass gap {record.mass_gap:.3e}")
    return record


def verdict(series: List[float], threshold: float, burn_in: int, tol: float = 1e-12) -> Verdict:
    final = series[-1]
    if not final < threshold:
        return "failed"
    tail = series[burn_in:]
    if all(b <= a + tol * max(1.0, a) for a, b in zip(tail, tail[1:])):
        return "monotone-decreasing"
    return "below-threshold"


async def diagnose_sequence_async(sequence: Sequence[PolyhedralConvexFunction], limit: PolyhedralConvexFunction,
                                  config: Optional[DiagnoseConfig] = None) -> ConvergenceReport:
    """
    Compare every term of a sequence with its claimed limit and judge each diagnostic.

    Terms are processed in worker threads, settings.WORKERS at a time; records keep input order.
    """
    config = DiagnoseConfig() if config is None else config
    if not sequence:
        raise ValueError("Empty sequence.")
    for phi in sequence:
        if phi.n != limit.n:
            raise DimensionMismatch(f"Sequence term on R^{phi.n} against a limit on R^{limit.n}.")

    reference = _Limit(limit, config)
    records: List[TermRecord] = []
    indexed = list(enumerate(sequence))
    for chunk in create_chunks(indexed, settings.WORKERS):
        tasks = [asyncio.to_thread(_term_record, i, phi, reference, config) for i, phi in chunk]
        records.extend(await asyncio.gather(*tasks))

    names = [d for d in config.diagnostics if d != "level" or reference.levels] + list(config.transforms)
    verdicts = {}
    for name in names:
        series = [r.series_value(name) for r in records]
        verdicts[name] = verdict(series, config.threshold, config.burn_in)
        logger.info(f"Diagnostic {name}: {verdicts[name]} (final gap {series[-1]:.3e})")

    kappa = {}
    final_epi = records[-1].epi.sup
    for tag in config.transforms:
        gap = records[-1].transform_gaps[tag]
        kappa[tag] = gap / final_epi if final_epi > 0 and math.isfinite(gap) else None

    return ConvergenceReport(
        terms=records,
        verdicts=verdicts,
        kappa=kappa,
        skipped_levels=reference.skipped,
        passed=all(v == "monotone-decreasing" for v in verdicts.values())
    )


def diagnose_sequence(sequence: Sequence[PolyhedralConvexFunction], limit: PolyhedralConvexFunction,
                      config: Optional[DiagnoseConfig] = None) -> ConvergenceReport:
    return asyncio.run(diagnose_sequence_async(sequence, limit, config))
