# geoscale/services/fractal_measure.py
"""
Koch curves, divider (yardstick) walks, box counting, rasterized area and
log-log regression.

Box and cell grids are half-open: a cell covers [x0, x1) x [y0, y1), except
that geometry lying exactly on the far edge of its bounding box falls into the
last column or row.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Sequence, Tuple, TypeVar, Union

import numpy as np
import shapely

from geoscale.core.config import settings
from geoscale.core.exceptions import InputError, NumericalError, ResourceError
from geoscale.models.fractal import KochSpec, LogLogFit, ScaleSeries, WalkResult
from geoscale.models.geometry import Polygon, Polyline, snap_tolerance_for
from geoscale.models.series import ValueSeries
from geoscale.services.geometry import bounding_box

logger = logging.getLogger("geoscale.fractal_measure")

# relative slack for a chord landing on a vertex
LANDING_TOLERANCE = 1e-9
MIN_FIT_SCALES = 3
MAX_GRID_CELLS = 4_194_304

_ROTATE_60 = np.array([[0.5, math.sqrt(3) / 2], [-math.sqrt(3) / 2, 0.5]])

T = TypeVar("T")


def _per_scale(fn: Callable[[float], T], scales: Sequence[float]) -> List[T]:
    """Evaluate fn for each scale, in a thread pool when WORKERS > 1; input order kept"""
    if settings.WORKERS > 1 and len(scales) > 1:
        with ThreadPoolExecutor(max_workers=settings.WORKERS) as pool:
            return list(pool.map(fn, scales))
    return [fn(s) for s in scales]


def _check_iterations(spec: KochSpec) -> None:
    if spec.iterations > settings.MAX_KOCH_ITERATIONS:
        raise ResourceError(
            f"Koch iteration {spec.iterations} exceeds the limit of {settings.MAX_KOCH_ITERATIONS} "
            f"({4 ** spec.iterations + 1} vertices)"
        )


def koch_curve(spec: KochSpec) -> Polyline:
    """Koch curve from (0, 0) to (unit, 0) with 4^n segments, bumps pointing up"""
    _check_iterations(spec)
    pts = np.array([[0.0, 0.0], [spec.unit, 0.0]])
    for _ in range(spec.iterations):
        a, b = pts[:-1], pts[1:]
        third = (b - a) / 3.0
        p1 = a + third
        peak = p1 + third @ _ROTATE_60
        p3 = a + 2.0 * third
        pts = np.vstack([np.stack([a, p1, peak, p3], axis=1).reshape(-1, 2), pts[-1:]])
    logger.debug(f"Koch curve n={spec.iterations}: {len(pts)} vertices")
    return Polyline(vertices=pts)


def koch_recursive_segments(spec: KochSpec) -> ValueSeries:
    """Segment lengths of every iteration 0..n: 4^k segments of unit / 3^k each"""
    _check_iterations(spec)
    values = np.concatenate([
        np.full(4 ** k, spec.unit / 3 ** k) for k in range(spec.iterations + 1)
    ])
    return ValueSeries(values=values.tolist(), label=f"koch-{spec.iterations}")


def _exit_root(start: np.ndarray, a: np.ndarray, b: np.ndarray, radius: float) -> np.ndarray:
    """Point on segment a->b where the distance from start grows through radius"""
    d = b - a
    f = a - start
    qa = float(np.dot(d, d))
    qb = 2.0 * float(np.dot(f, d))
    qc = float(np.dot(f, f)) - radius * radius
    t = (-qb + math.sqrt(max(qb * qb - 4.0 * qa * qc, 0.0))) / (2.0 * qa)
    return a + min(max(t, 0.0), 1.0) * d


def yardstick_walk(p: Polyline, yardstick: float) -> WalkResult:
    """
    Walk the curve with a fixed chord length.

    From the current point, the next point is the earliest point further along
    the curve at straight-line distance yardstick. The distance to the end
    vertex left when no such point exists is added as a remainder.
    """
    if not math.isfinite(yardstick) or yardstick <= 0:
        raise InputError(f"yardstick must be positive and finite, got {yardstick}")

    v = p.vertices
    n = len(v)
    current = v[0]
    segment = 0  # current point lies on segment (segment, segment + 1)
    steps = 0
    reach = yardstick * (1.0 - LANDING_TOLERANCE)
    while True:
        # search the following vertices in growing windows
        hit = -1
        lo, window = segment + 1, 64
        while lo < n:
            hi = min(n, lo + window)
            dist = np.hypot(v[lo:hi, 0] - current[0], v[lo:hi, 1] - current[1])
            beyond = np.flatnonzero(dist >= reach)
            if len(beyond):
                hit = lo + int(beyond[0])
                break
            lo, window = hi, window * 4
        if hit < 0:
            break
        steps += 1
        landing = math.hypot(*(v[hit] - current))
        if abs(landing - yardstick) <= LANDING_TOLERANCE * yardstick:
            current, segment = v[hit], hit
        else:
            a = current if hit - 1 == segment else v[hit - 1]
            current, segment = _exit_root(current, a, v[hit], yardstick), hit - 1
        if segment >= n - 1:
            break

    remainder = math.hypot(*(v[-1] - current))
    return WalkResult(yardstick=yardstick, steps=steps, measured_length=steps * yardstick + remainder)


def richardson_table(p: Polyline, scales: ScaleSeries) -> List[WalkResult]:
    """One divider walk per yardstick, largest yardstick first"""
    return _per_scale(lambda e: yardstick_walk(p, e), scales.scales)


def loglog_fit(points: Sequence[Tuple[float, float]]) -> LogLogFit:
    """Ordinary least squares on (ln x, ln y)"""
    if len(points) < 2:
        raise NumericalError(f"a log-log fit needs at least 2 points, got {len(points)}")
    xy = np.asarray(points, dtype=float)
    if not np.all(np.isfinite(xy)) or np.any(xy <= 0):
        raise InputError("log-log fit needs positive finite coordinates")
    lx, ly = np.log(xy[:, 0]), np.log(xy[:, 1])
    if np.ptp(lx) == 0:
        raise NumericalError("log-log fit needs at least 2 distinct x values")

    slope, intercept = np.polyfit(lx, ly, 1)
    residual = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    ss_res = float(np.sum(residual ** 2))
    r_squared = 1.0 if ss_tot == 0 else min(max(1.0 - ss_res / ss_tot, 0.0), 1.0)
    return LogLogFit(slope=float(slope), intercept=float(intercept), r_squared=r_squared,
                     n_points=len(points))


def _with_dimension(fit: LogLogFit, dimension: float) -> LogLogFit:
    return fit.model_copy(update={"dimension": dimension})


def divider_fit(walks: Sequence[WalkResult]) -> LogLogFit:
    """Fit ln(length) against ln(yardstick) over finished walks; D = 1 - slope"""
    if len(walks) < MIN_FIT_SCALES:
        raise NumericalError(f"divider dimension needs at least {MIN_FIT_SCALES} yardsticks, got {len(walks)}")
    fit = loglog_fit([(w.yardstick, w.measured_length) for w in walks])
    logger.info(f"Divider fit over {len(walks)} yardsticks: slope={fit.slope!r} r2={fit.r_squared!r}")
    return _with_dimension(fit, 1.0 - fit.slope)


def divider_dimension(p: Polyline, scales: ScaleSeries) -> LogLogFit:
    """Walk every yardstick, then fit with divider_fit"""
    if len(scales) < MIN_FIT_SCALES:
        raise NumericalError(f"divider dimension needs at least {MIN_FIT_SCALES} yardsticks, got {len(scales)}")
    return divider_fit(richardson_table(p, scales))


def predict_length(fit: LogLogFit, yardstick: float) -> float:
    """Length at another yardstick inside the fitted scaling range"""
    return fit.predict(yardstick)


def _lattice_range(lo: float, hi: float, origin: float, size: float) -> Tuple[int, int]:
    """First and last cell index covering [lo, hi] on the lattice through origin"""

    def snapped(q: float) -> float:
        r = round(q)
        return float(r) if abs(q - r) <= 1e-9 * max(1.0, abs(q)) else q

    first = math.floor(snapped((lo - origin) / size))
    last = max(first, math.ceil(snapped((hi - origin) / size)) - 1)
    return first, last


def _occupied_cells(geometry: Union[Polyline, Polygon], size: float, origin: Tuple[float, float],
                    slack: float) -> int:
    box = bounding_box(geometry)
    i0, i1 = _lattice_range(box[0], box[2], origin[0], size)
    j0, j1 = _lattice_range(box[1], box[3], origin[1], size)
    ncols, nrows = i1 - i0 + 1, j1 - j0 + 1
    if ncols * nrows > MAX_GRID_CELLS:
        raise ResourceError(f"cell size {size} needs {ncols * nrows} cells (limit {MAX_GRID_CELLS})")

    x0 = origin[0] + np.arange(i0, i1 + 1) * size
    y0 = origin[1] + np.arange(j0, j1 + 1) * size
    # half-open cells: pull the high edges in, except on the far edge
    x1 = x0 + size - slack
    y1 = y0 + size - slack
    x1[-1] += slack
    y1[-1] += slack
    gx0, gy0 = np.meshgrid(x0, y0)
    gx1, gy1 = np.meshgrid(x1, y1)
    cells = shapely.box(gx0.ravel(), gy0.ravel(), gx1.ravel(), gy1.ravel())

    shape = geometry.to_shapely() if isinstance(geometry, Polygon) else shapely.LineString(geometry.vertices)
    shapely.prepare(shape)
    return int(shapely.intersects(shape, cells).sum())


def _coords(geometry: Union[Polyline, Polygon]) -> np.ndarray:
    return geometry.vertices if isinstance(geometry, Polyline) else geometry.exterior


def box_count(geometry: Union[Polyline, Polygon], box_sizes: ScaleSeries,
              anchor: Tuple[float, float] = (0.0, 0.0)) -> List[Tuple[float, int]]:
    """(box size, occupied boxes) per size, grid anchored at the bounding-box lower-left plus anchor"""
    box = bounding_box(geometry)
    origin = (box[0] + anchor[0], box[1] + anchor[1])
    slack = snap_tolerance_for(_coords(geometry))
    counts = _per_scale(lambda s: _occupied_cells(geometry, s, origin, slack), box_sizes.scales)
    return list(zip(box_sizes.scales, counts))


def boxcount_dimension(counts: Sequence[Tuple[float, int]]) -> LogLogFit:
    """Fit ln(count) against ln(size); D = -slope"""
    sizes = {size for size, _ in counts}
    if len(sizes) < MIN_FIT_SCALES:
        raise NumericalError(f"box-count dimension needs at least {MIN_FIT_SCALES} distinct sizes, got {len(sizes)}")
    if any(count < 1 for _, count in counts):
        raise NumericalError("every box size must have at least one occupied box")
    fit = loglog_fit([(size, count) for size, count in counts])
    return _with_dimension(fit, -fit.slope)


def rasterized_area(poly: Polygon, cell_sizes: ScaleSeries,
                    anchor: Tuple[float, float] = (0.0, 0.0)) -> List[Tuple[float, float]]:
    """
    Area of the cells touching the filled polygon, per cell size.

    Cells lie on the global lattice through anchor, so finer lattices nest in
    coarser ones when sizes halve and the cover shrinks toward the true area.
    """
    slack = snap_tolerance_for(poly.exterior)
    counts = _per_scale(lambda c: _occupied_cells(poly, c, anchor, slack), cell_sizes.scales)
    return [(c, n * c * c) for c, n in zip(cell_sizes.scales, counts)]


def area_dimension(areas: Sequence[Tuple[float, float]]) -> LogLogFit:
    """Fit ln(cover area) against ln(cell size); reported as 2 - slope"""
    if len(areas) < MIN_FIT_SCALES:
        raise NumericalError(f"area fit needs at least {MIN_FIT_SCALES} cell sizes, got {len(areas)}")
    fit = loglog_fit(areas)
    return _with_dimension(fit, 2.0 - fit.slope)
