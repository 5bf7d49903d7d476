# geoscale/models/fractal.py
import math
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator


class KochSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    iterations: int = Field(ge=0)
    unit: float = Field(1.0, gt=0, allow_inf_nan=False)

    @property
    def segment_count(self) -> int:
        return 4 ** self.iterations

    @property
    def segment_length(self) -> float:
        return self.unit / 3 ** self.iterations


class ScaleSeries(BaseModel):
    """Measuring scales (yardsticks, box or cell sizes), largest first"""

    model_config = ConfigDict(frozen=True)

    scales: List[float] = Field(min_length=1)

    @field_validator("scales")
    @classmethod
    def decreasing(cls, v):
        for s in v:
            if not math.isfinite(s) or s <= 0:
                raise ValueError(f"scales must be positive and finite, got {s}")
        for a, b in zip(v, v[1:]):
            if not b < a:
                raise ValueError(f"scales must be strictly decreasing, got {a} then {b}")
        return v

    @classmethod
    def of(cls, values) -> "ScaleSeries":
        """Accepts any order; sorts largest first"""
        return cls(scales=sorted((float(x) for x in values), reverse=True))

    def __len__(self) -> int:
        return len(self.scales)


class LogLogFit(BaseModel):
    """
    Least-squares line through (ln x, ln y).

    dimension is set by the producing measurement: 1 - slope for divider
    walks, -slope for box counts.
    """

    model_config = ConfigDict(frozen=True)

    slope: float
    intercept: float
    r_squared: float = Field(ge=0, le=1)
    dimension: Optional[float] = None
    n_points: int = Field(ge=2)

    def predict(self, x: float) -> float:
        """y on the fitted power law at x"""
        if not x > 0:
            raise ValueError(f"prediction needs a positive scale, got {x}")
        return math.exp(self.intercept) * x ** self.slope


class WalkResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    yardstick: float
    steps: int = Field(ge=0)
    measured_length: float = Field(ge=0)
