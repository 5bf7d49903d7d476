# geoscale/models/series.py
import math
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator


class ValueSeries(BaseModel):
    """Ordered positive measurements (segment lengths, block areas, degrees...)"""

    model_config = ConfigDict(frozen=True)

    values: List[float] = Field(min_length=1)
    label: Optional[str] = None

    @field_validator("values")
    @classmethod
    def positive_finite(cls, v):
        for index, value in enumerate(v):
            if not math.isfinite(value) or value <= 0:
                raise ValueError(f"value {index} must be positive and finite, got {value}")
        return v

    def scaled(self, factor: float) -> "ValueSeries":
        return ValueSeries(values=[value * factor for value in self.values], label=self.label)

    def __len__(self) -> int:
        return len(self.values)


class HeadTailLevel(BaseModel):
    """One attempted split around the arithmetic mean"""

    model_config = ConfigDict(frozen=True)

    mean: float
    head_count: int = Field(ge=0)
    tail_count: int = Field(ge=0)
    head_fraction: float = Field(ge=0, le=1)
    accepted: bool


class HeadTailPartition(BaseModel):
    """
    Result of head/tail breaks.

    levels holds every attempted split: the accepted ones in order, then at
    most one rejected attempt that stopped the recursion. class_assignment maps
    each input index to its class, 0 being the tail of the first split.
    """

    model_config = ConfigDict(frozen=True)

    levels: List[HeadTailLevel]
    class_assignment: Dict[int, int]
    head_limit: float

    @property
    def accepted_levels(self) -> List[HeadTailLevel]:
        return [level for level in self.levels if level.accepted]

    @property
    def ht_index(self) -> int:
        return len(self.accepted_levels) + 1

    @property
    def head_sizes(self) -> List[int]:
        return [level.head_count for level in self.accepted_levels]

    def to_json_dict(self) -> dict:
        return {
            "ht_index": self.ht_index,
            "head_limit": self.head_limit,
            "levels": [level.model_dump() for level in self.levels],
            "class_assignment": {str(k): v for k, v in sorted(self.class_assignment.items())},
        }


class RankSizeRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    rank: int = Field(ge=1)
    value: float
