# geoscale/models/terrain.py
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from geoscale.models.geometry import RasterGrid


class SlopeGrid(BaseModel):
    """Slope in degrees, same shape as the source DEM; border cells are nodata"""

    model_config = ConfigDict(frozen=True)

    grid: RasterGrid
    method: str = "horn"

    @model_validator(mode="after")
    def in_range(self):
        valid = self.grid.values[self.grid.valid_mask]
        if valid.size and (valid.min() < 0 or valid.max() >= 90):
            raise ValueError("slope values must lie in [0, 90) degrees")
        return self

    @property
    def valid_values(self) -> np.ndarray:
        return self.grid.values[self.grid.valid_mask]


class SlopeHistogram(BaseModel):
    """Area per slope class; bins are (lower edge in degrees, area in units^2)"""

    model_config = ConfigDict(frozen=True)

    bin_width: float = Field(gt=0)
    bins: List[Tuple[float, float]]

    @property
    def total_area(self) -> float:
        return sum(area for _, area in self.bins)


class ResolutionLevel(BaseModel):
    """Slope summary of one rung of a coarsening ladder"""

    model_config = ConfigDict(frozen=True)

    factor: int = Field(ge=1)
    cell_size: float
    min_slope: float
    max_slope: float
    width: float
    histogram: SlopeHistogram
