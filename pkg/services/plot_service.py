import logging
from pathlib import Path
from typing import List, Optional, Sequence

import matplotlib

matplotlib.use('Agg')
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from logic.exceptions import CvxLabError, UnsupportedDimension  # noqa: E402
from logic.function import PolyhedralConvexFunction  # noqa: E402
from logic.geometry import box  # noqa: E402
from logic.polyhedron import Polyhedron  # noqa: E402
from utils.config import settings  # noqa: E402

logger = logging.getLogger(__name__)

# Half-width of the drawing window along directions where the function is defined forever.
DEFAULT_WINDOW = 4.0


def _is_indicator(phi: PolyhedralConvexFunction) -> bool:
    return bool(np.all(np.abs(phi.slopes) <= phi.tol) and np.all(np.abs(phi.intercepts) <= phi.tol))


def _window_1d(phi: PolyhedralConvexFunction) -> np.ndarray:
    """Abscissae of the graph: every breakpoint plus the domain ends, or a margin where the domain is open."""
    V = phi.epigraph.vertices
    breaks = V[:, 0] if len(V) else np.zeros(1)
    dom = phi.domain.vertices[:, 0] if len(phi.domain.vertices) else np.zeros(0)
    lo_pts = np.r_[breaks, dom]
    span = max(1.0, float(np.ptp(lo_pts)) if len(lo_pts) else 1.0)
    lo = phi.domain.support(np.array([-1.0]))
    hi = phi.domain.support(np.array([1.0]))
    left = -lo if np.isfinite(lo) else float(lo_pts.min()) - 0.5 * span
    right = hi if np.isfinite(hi) else float(lo_pts.max()) + 0.5 * span
    return np.unique(np.r_[left, breaks[(breaks > left) & (breaks < right)], right])


def _plot_1d(ax, phi: PolyhedralConvexFunction):
    x = _window_1d(phi)
    y = phi.evaluate_many(x[:, None])
    left, right = float(x[0]), float(x[-1])
    bar_y = float(np.min(y)) - 0.1 * max(1.0, float(np.ptp(y)))
    bounded_left = np.isfinite(phi.domain.support(np.array([-1.0])))
    bounded_right = np.isfinite(phi.domain.support(np.array([1.0])))

    if _is_indicator(phi):
        ax.plot(x, np.zeros_like(x), linestyle='none', marker='o', color='C0', label='0 on domain')
    else:
        ax.plot(x, y, color='C0', label=phi.meta.get("name", "phi"))
    # domain bar, with closed ends where the domain stops
    ax.plot([left, right], [bar_y, bar_y], color='C1', linewidth=3, label='domain')
    for end, closed in ((left, bounded_left), (right, bounded_right)):
        if closed:
            ax.plot([end], [bar_y], marker='|', markersize=12, color='C1')
    ax.set_xlabel('x')
    ax.set_ylabel('phi(x)')


def _ordered_boundary(points: np.ndarray) -> np.ndarray:
    """Polygon vertices in counter-clockwise order, closed back to the first vertex."""
    center = points.mean(axis=0)
    angles = np.arctan2(points[:, 1] - center[1], points[:, 0] - center[0])
    ordered = points[np.argsort(angles, kind='stable')]
    return np.vstack([ordered, ordered[:1]])


def _plot_2d(ax, phi: PolyhedralConvexFunction, levels: Sequence[float]):
    sets: List[tuple] = []
    for s in levels:
        try:
            sets.append((s, phi.level_set(s)))
        except CvxLabError as e:
            logger.debug(f"Level {s} skipped: {e}")
    bounded = [G.max_norm() for _, G in sets if G.is_bounded and not G.is_empty()]
    radius = 1.1 * max(bounded) if bounded else DEFAULT_WINDOW
    window = box([-radius, -radius], [radius, radius])

    for i, (s, G) in enumerate(sets):
        G: Polyhedron = G if G.is_bounded else G.intersect(window)
        if G.is_empty():
            continue
        boundary = _ordered_boundary(G.vertices)
        ax.plot(boundary[:, 0], boundary[:, 1], color=f'C{i % 10}', label=f's = {s:g}')
    ax.plot([0.0], [0.0], marker='+', color='black')
    ax.set_xlim(-radius, radius)
    ax.set_ylim(-radius, radius)
    ax.set_aspect('equal')
    ax.set_xlabel('x1')
    ax.set_ylabel('x2')


def render_svg(phi: PolyhedralConvexFunction, out_path: Path, levels: Optional[Sequence[float]] = None):
    """
    Draw phi as an SVG file: the graph with a domain bar in one dimension, level-set contours in two.

    Output is byte-stable for a fixed input: fixed hash salt and no date metadata.

    Raises:
        UnsupportedDimension: phi lives on R^n with n > 2.
    """
    if phi.n not in (1, 2):
        raise UnsupportedDimension(f"Plots are available for n = 1 and n = 2, not n = {phi.n}.")
    levels = settings.PLOT_LEVELS if levels is None else list(levels)

    plt.rcParams['svg.hashsalt'] = 'cvxlab'
    fig, ax = plt.subplots(figsize=(6, 6))
    try:
        if phi.n == 1:
            _plot_1d(ax, phi)
        else:
            _plot_2d(ax, phi, levels)
        ax.grid(True)
        ax.legend(loc='upper right')
        fig.tight_layout()
        fig.savefig(out_path, format='svg', metadata={'Date': None})
    finally:
        plt.close(fig)
    logger.info(f"Plot written to {out_path}")
