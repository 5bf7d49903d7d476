# geoscale/services/terrain.py
"""
Slope grids, block-mean coarsening, slope-class histograms and a seeded
diamond-square surface generator.
"""
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from geoscale.core.exceptions import InputError, NumericalError
from geoscale.models.geometry import DEFAULT_NODATA, Point2D, RasterGrid
from geoscale.models.terrain import ResolutionLevel, SlopeGrid, SlopeHistogram

logger = logging.getLogger("geoscale.terrain")

# slopes this close below a class edge are counted in the upper class
EDGE_SLACK = 1e-9


def slope_grid(dem: RasterGrid) -> SlopeGrid:
    """
    Horn's 3x3 weighted finite differences.

    Border cells and cells with a nodata neighbour get nodata.
    """
    if dem.nrows < 3 or dem.ncols < 3:
        raise InputError(f"slope needs at least a 3x3 grid, got {dem.nrows}x{dem.ncols}")

    valid = dem.valid_mask
    z = np.where(valid, dem.values, 0.0)

    def win(dr: int, dc: int) -> np.ndarray:
        return z[1 + dr: z.shape[0] - 1 + dr, 1 + dc: z.shape[1] - 1 + dc]

    # row 0 is north: dr=-1 is the northern neighbour
    gx = ((win(-1, 1) + 2 * win(0, 1) + win(1, 1)) - (win(-1, -1) + 2 * win(0, -1) + win(1, -1))) / (8 * dem.cell_size)
    gy = ((win(1, -1) + 2 * win(1, 0) + win(1, 1)) - (win(-1, -1) + 2 * win(-1, 0) + win(-1, 1))) / (8 * dem.cell_size)

    ok = np.ones_like(gx, dtype=bool)
    for dr in (-1, 0, 1):
        for dc in (-1, 0, 1):
            ok &= valid[1 + dr: valid.shape[0] - 1 + dr, 1 + dc: valid.shape[1] - 1 + dc]

    degrees = np.degrees(np.arctan(np.hypot(gx, gy)))
    degrees = np.minimum(degrees, np.nextafter(90.0, 0.0))
    out = np.full(dem.values.shape, DEFAULT_NODATA, dtype=float)
    out[1:-1, 1:-1] = np.where(ok, degrees, DEFAULT_NODATA)
    return SlopeGrid(grid=dem.with_values(out, nodata=DEFAULT_NODATA), method="horn")


def coarsen(dem: RasterGrid, factor: int) -> RasterGrid:
    """
    Block means over factor x factor cells, ignoring nodata.

    Trailing columns (east) and rows (south) that do not fill a block are
    dropped; the lower-left corner moves up by the dropped rows.
    """
    if factor < 2:
        raise InputError(f"coarsening factor must be at least 2, got {factor}")
    nrows, ncols = dem.nrows // factor, dem.ncols // factor
    if nrows < 1 or ncols < 1:
        raise InputError(f"a {dem.nrows}x{dem.ncols} grid is too small for factor {factor}")
    drop_rows, drop_cols = dem.nrows % factor, dem.ncols % factor
    if drop_rows or drop_cols:
        logger.warning(
            f"Grid {dem.nrows}x{dem.ncols} is not divisible by {factor}: "
            f"dropping {drop_rows} rows and {drop_cols} columns"
        )

    values = dem.values[: nrows * factor, : ncols * factor]
    valid = dem.valid_mask[: nrows * factor, : ncols * factor]
    blocks = np.where(valid, values, 0.0).reshape(nrows, factor, ncols, factor)
    counts = valid.reshape(nrows, factor, ncols, factor).sum(axis=(1, 3))
    sums = blocks.sum(axis=(1, 3))
    with np.errstate(invalid="ignore", divide="ignore"):
        means = np.where(counts > 0, sums / np.maximum(counts, 1), dem.nodata)

    return dem.with_values(
        means,
        ncols=ncols,
        nrows=nrows,
        cell_size=dem.cell_size * factor,
        origin=Point2D(x=dem.origin.x, y=dem.origin.y + drop_rows * dem.cell_size),
    )


def slope_histogram(s: SlopeGrid, bin_width: float = 1.0) -> SlopeHistogram:
    """Area per slope class of width bin_width, from 0 up to the steepest class"""
    if not bin_width > 0:
        raise InputError(f"bin width must be positive, got {bin_width}")
    values = s.valid_values
    cell_area = s.grid.cell_size ** 2
    if values.size == 0:
        return SlopeHistogram(bin_width=bin_width, bins=[])
    classes = np.floor(values / bin_width + EDGE_SLACK).astype(int)
    counts = np.bincount(classes)
    bins = [(k * bin_width, float(c) * cell_area) for k, c in enumerate(counts)]
    return SlopeHistogram(bin_width=bin_width, bins=bins)


def slope_range(s: SlopeGrid) -> Tuple[float, float, float]:
    """(min, max, max - min) over valid cells"""
    values = s.valid_values
    if values.size == 0:
        raise NumericalError("slope grid has no valid cells")
    lo, hi = float(values.min()), float(values.max())
    return lo, hi, hi - lo


def resolution_ladder(dem: RasterGrid, factors: Sequence[int],
                      bin_width: float = 1.0) -> List[ResolutionLevel]:
    """Slope summary of the DEM itself and of each coarsened copy"""
    levels: List[ResolutionLevel] = []
    for factor in [1, *[f for f in factors if f != 1]]:
        grid = dem if factor == 1 else coarsen(dem, factor)
        if grid.nrows < 3 or grid.ncols < 3:
            raise InputError(f"factor {factor} leaves a {grid.nrows}x{grid.ncols} grid, too small for slope")
        slopes = slope_grid(grid)
        lo, hi, width = slope_range(slopes)
        levels.append(ResolutionLevel(
            factor=factor,
            cell_size=grid.cell_size,
            min_slope=lo,
            max_slope=hi,
            width=width,
            histogram=slope_histogram(slopes, bin_width),
        ))
        logger.info(f"Factor {factor}: cell {grid.cell_size}, slope {lo:.3f}..{hi:.3f}")
    return levels


def _neighbour_mean(z: np.ndarray, rows: np.ndarray, cols: np.ndarray, half: int) -> np.ndarray:
    """Mean of the up to 4 axis neighbours at distance half"""
    n = z.shape[0]
    r, c = np.meshgrid(rows, cols, indexing="ij")
    total = np.zeros(r.shape)
    count = np.zeros(r.shape)
    for dr, dc in ((-half, 0), (half, 0), (0, -half), (0, half)):
        rr, cc = r + dr, c + dc
        ok = (rr >= 0) & (rr < n) & (cc >= 0) & (cc < n)
        total[ok] += z[rr[ok], cc[ok]]
        count[ok] += 1
    return total / count


def synthetic_fractal_surface(size_exponent: int, roughness: float, seed: int,
                              relief: Optional[float] = None) -> RasterGrid:
    """
    Diamond-square surface of (2^k + 1)^2 cells with cell size 1.

    Displacements are normal draws from numpy's PCG64 generator; their scale
    starts at relief (default a quarter of the grid extent) and is divided
    by 2^roughness per level.
    """
    if not 2 <= size_exponent <= 12:
        raise InputError(f"size exponent must lie in [2, 12], got {size_exponent}")
    if not 0 < roughness < 1:
        raise InputError(f"roughness must lie in (0, 1), got {roughness}")
    if relief is not None and not relief > 0:
        raise InputError(f"relief must be positive, got {relief}")

    size = 2 ** size_exponent + 1
    amplitude = 0.25 * (size - 1) if relief is None else float(relief)
    rng = np.random.default_rng(seed)
    z = np.zeros((size, size))
    z[:: size - 1, :: size - 1] = rng.normal(0.0, amplitude, (2, 2))

    step = size - 1
    while step > 1:
        half = step // 2
        # diamond: centre of each square
        z[half::step, half::step] = (
            z[:-1:step, :-1:step] + z[:-1:step, step::step]
            + z[step::step, :-1:step] + z[step::step, step::step]
        ) / 4 + rng.normal(0.0, amplitude, (size // step, size // step))
        # square: edge midpoints, from corners and diamond centres
        for rows, cols in ((np.arange(0, size, step), np.arange(half, size, step)),
                           (np.arange(half, size, step), np.arange(0, size, step))):
            z[np.ix_(rows, cols)] = _neighbour_mean(z, rows, cols, half) + rng.normal(
                0.0, amplitude, (len(rows), len(cols))
            )
        amplitude /= 2 ** roughness
        step = half

    logger.debug(f"Diamond-square k={size_exponent} H={roughness} seed={seed}")
    return RasterGrid(ncols=size, nrows=size, cell_size=1.0, values=z)
