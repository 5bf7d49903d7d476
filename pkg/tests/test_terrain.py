import logging
import math

import numpy as np
import pytest

from geoscale.core.exceptions import InputError
from geoscale.models.geometry import RasterGrid
from geoscale.services.terrain import (
    coarsen,
    resolution_ladder,
    slope_grid,
    slope_histogram,
    slope_range,
    synthetic_fractal_surface,
)
from tests.conftest import plane_dem


def interior(s):
    return s.grid.values[1:-1, 1:-1]


def test_plane_slope(plane):
    assert np.allclose(interior(slope_grid(plane)), 30.0, atol=1e-6)


def test_border_cells_are_nodata(plane):
    s = slope_grid(plane)
    assert not s.grid.valid_mask[0].any()
    assert not s.grid.valid_mask[:, -1].any()
    assert s.grid.valid_mask[1:-1, 1:-1].all()


def test_constant_dem_is_flat():
    s = slope_grid(RasterGrid(ncols=5, nrows=5, cell_size=10.0, values=np.full((5, 5), 120.0)))
    assert np.all(interior(s) == 0.0)
    assert s.valid_values.size == 9


def test_diagonal_plane():
    y, x = np.mgrid[0:6, 0:6]
    dem = RasterGrid(ncols=6, nrows=6, cell_size=1.0, values=(x + (5 - y)).astype(float))
    assert np.allclose(interior(slope_grid(dem)), math.degrees(math.atan(math.sqrt(2))), atol=1e-9)


def test_slope_ignores_added_constant(plane):
    raised = plane.with_values(plane.values + 1000.0)
    assert np.allclose(interior(slope_grid(raised)), interior(slope_grid(plane)))


def test_nodata_neighbour_spreads():
    values = np.zeros((5, 5))
    values[2, 2] = -9999.0
    s = slope_grid(RasterGrid(ncols=5, nrows=5, cell_size=1.0, values=values))
    assert s.valid_values.size == 0


def test_slope_needs_3x3():
    with pytest.raises(InputError):
        slope_grid(RasterGrid(ncols=2, nrows=5, cell_size=1.0, values=np.zeros((5, 2))))


def test_coarsen_block_mean():
    out = coarsen(RasterGrid(ncols=2, nrows=2, cell_size=1.0, values=[[0, 2], [4, 6]]), 2)
    assert out.values.tolist() == [[3.0]]
    assert out.cell_size == 2.0


def test_coarsen_ignores_nodata():
    out = coarsen(RasterGrid(ncols=2, nrows=2, cell_size=1.0, values=[[0, -9999], [4, -9999]]), 2)
    assert out.values.tolist() == [[2.0]]


def test_coarsen_all_nodata_block():
    out = coarsen(RasterGrid(ncols=2, nrows=2, cell_size=1.0, values=np.full((2, 2), -9999.0)), 2)
    assert not out.valid_mask.any()


def test_coarsen_drops_remainder_with_warning(caplog):
    dem = RasterGrid(ncols=5, nrows=5, cell_size=1.0, values=np.arange(25.0).reshape(5, 5))
    with caplog.at_level(logging.WARNING, logger="geoscale.terrain"):
        out = coarsen(dem, 2)
    assert (out.nrows, out.ncols) == (2, 2)
    assert "dropping 1 rows and 1 columns" in caplog.text
    # the dropped southern row moves the lower-left corner up
    assert out.origin.y == 1.0


def test_coarsen_factor_must_exceed_one(plane):
    with pytest.raises(InputError):
        coarsen(plane, 1)


@pytest.mark.parametrize("factor", [2, 4, 8])
def test_plane_slope_survives_coarsening(factor):
    s = slope_grid(coarsen(plane_dem(n=33), factor))
    assert np.allclose(interior(s), 30.0, atol=1e-6)


def test_histogram_of_plane(plane):
    h = slope_histogram(slope_grid(plane), 1.0)
    lower, area = h.bins[-1]
    assert lower == 30.0
    assert area == pytest.approx(31 * 31)
    assert h.total_area == pytest.approx(31 * 31)


def test_histogram_of_flat_dem():
    s = slope_grid(RasterGrid(ncols=4, nrows=4, cell_size=2.0, values=np.zeros((4, 4))))
    assert slope_histogram(s, 1.0).bins == [(0.0, 16.0)]


def test_histogram_conserves_area():
    s = slope_grid(synthetic_fractal_surface(5, 0.5, seed=3))
    h = slope_histogram(s, 2.5)
    assert h.total_area == pytest.approx(s.valid_values.size * s.grid.cell_size ** 2)
    assert all(area >= 0 for _, area in h.bins)


def test_histogram_bad_width(plane):
    with pytest.raises(InputError):
        slope_histogram(slope_grid(plane), 0.0)


def test_surface_is_deterministic():
    a = synthetic_fractal_surface(5, 0.7, seed=11)
    b = synthetic_fractal_surface(5, 0.7, seed=11)
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, synthetic_fractal_surface(5, 0.7, seed=12).values)


def test_smallest_surface():
    dem = synthetic_fractal_surface(2, 0.5, seed=0)
    assert (dem.nrows, dem.ncols) == (5, 5)


@pytest.mark.parametrize("k, h", [(1, 0.5), (13, 0.5), (4, 0.0), (4, 1.0)])
def test_surface_parameter_ranges(k, h):
    with pytest.raises(InputError):
        synthetic_fractal_surface(k, h, seed=0)


@pytest.mark.parametrize("seed", range(5))
def test_rougher_surface_is_steeper(seed):
    smooth = slope_range(slope_grid(synthetic_fractal_surface(6, 0.9, seed)))[1]
    rough = slope_range(slope_grid(synthetic_fractal_surface(6, 0.3, seed)))[1]
    assert rough > smooth


@pytest.mark.parametrize("seed", range(5))
def test_slope_range_contracts_with_coarsening(seed):
    levels = resolution_ladder(synthetic_fractal_surface(8, 0.5, seed), [2, 4, 8])
    assert [level.factor for level in levels] == [1, 2, 4, 8]
    maxima = [level.max_slope for level in levels]
    widths = [level.width for level in levels]
    assert maxima == sorted(maxima, reverse=True)
    assert widths == sorted(widths, reverse=True)


def test_ladder_too_coarse():
    with pytest.raises(InputError):
        resolution_ladder(plane_dem(n=9), [4])
