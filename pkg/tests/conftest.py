import math

import numpy as np
import pytest

from geoscale import datasets
from geoscale.core.config import Settings, settings
from geoscale.models.geometry import Polygon, Polyline, RasterGrid
from geoscale.services.arrangement import build_arrangement


@pytest.fixture(autouse=True)
def restore_settings():
    """Commands may overwrite the shared settings through --config"""
    saved = settings.model_dump()
    yield
    for name in Settings.model_fields:
        setattr(settings, name, saved[name])


@pytest.fixture
def unit_square() -> Polygon:
    return Polygon(exterior=[(0, 0), (1, 0), (1, 1), (0, 1)])


@pytest.fixture
def unit_segment() -> Polyline:
    return Polyline(vertices=[(0, 0), (1, 0)])


@pytest.fixture
def twenty_gon() -> Polygon:
    angles = np.linspace(0.0, 2 * math.pi, 20, endpoint=False)
    return Polygon(exterior=np.column_stack([5 + 3 * np.cos(angles), 4 + 3 * np.sin(angles)]))


def plane_dem(n: int = 33, degrees: float = 30.0, cell_size: float = 1.0) -> RasterGrid:
    """z = x * tan(degrees), rising to the east"""
    x = (np.arange(n) + 0.5) * cell_size
    values = np.tile(x * math.tan(math.radians(degrees)), (n, 1))
    return RasterGrid(ncols=n, nrows=n, cell_size=cell_size, values=values)


@pytest.fixture
def plane():
    return plane_dem()


@pytest.fixture
def plus_arrangement():
    return build_arrangement(datasets.plus_sign())


@pytest.fixture
def grid_arrangement():
    return build_arrangement(datasets.block_grid(3, 3))
