# geoscale/models/maup.py
from typing import Dict, List, Optional, Set, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

CellIndex = Tuple[int, int]  # (col, row)


class CountCell(BaseModel):
    model_config = ConfigDict(frozen=True)

    numerator: int = Field(ge=0)
    denominator: int = Field(ge=0)

    @model_validator(mode="after")
    def rate_at_most_one(self):
        if self.numerator > self.denominator:
            raise ValueError(f"numerator {self.numerator} exceeds denominator {self.denominator}")
        return self

    @property
    def rate(self) -> Optional[float]:
        return 100.0 * self.numerator / self.denominator if self.denominator else None


class CountGrid(BaseModel):
    """Numerator/denominator counts per cell (e.g. unemployed / labour force)"""

    model_config = ConfigDict(frozen=True)

    ncols: int = Field(ge=1)
    nrows: int = Field(ge=1)
    cells: Dict[CellIndex, CountCell]

    @model_validator(mode="after")
    def complete(self):
        expected = {(c, r) for c in range(self.ncols) for r in range(self.nrows)}
        missing = expected - set(self.cells)
        extra = set(self.cells) - expected
        if missing:
            raise ValueError(f"grid is missing cells {sorted(missing)[:5]}")
        if extra:
            raise ValueError(f"cells outside the {self.ncols}x{self.nrows} grid: {sorted(extra)[:5]}")
        return self

    @classmethod
    def from_rows(cls, numerators: List[List[int]], denominators: List[List[int]]) -> "CountGrid":
        """Build from row-major matrices (row 0 first)"""
        nrows, ncols = len(numerators), len(numerators[0])
        cells = {
            (c, r): CountCell(numerator=numerators[r][c], denominator=denominators[r][c])
            for r in range(nrows) for c in range(ncols)
        }
        return cls(ncols=ncols, nrows=nrows, cells=cells)


class Zoning(BaseModel):
    """Assignment of every cell to exactly one zone"""

    model_config = ConfigDict(frozen=True)

    name: str
    assignment: Dict[CellIndex, str]

    @model_validator(mode="after")
    def has_zones(self):
        if not self.assignment:
            raise ValueError(f"zoning {self.name!r} assigns no cells")
        return self

    @property
    def zones(self) -> Set[str]:
        return set(self.assignment.values())

    def members(self) -> Dict[str, List[CellIndex]]:
        grouped: Dict[str, List[CellIndex]] = {}
        for cell, zone in sorted(self.assignment.items()):
            grouped.setdefault(zone, []).append(cell)
        return grouped


class ZoneRate(BaseModel):
    model_config = ConfigDict(frozen=True)

    zone: str
    numerator: int
    denominator: int
    rate: Optional[float]  # percent; None when the denominator is zero


class ScaleEffectRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    zoning: str
    zone_count: int
    min_rate: Optional[float]
    max_rate: Optional[float]
    spread: Optional[float]
    global_rate: Optional[float]


class ZoningEffectReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    rate_vectors: Dict[str, List[ZoneRate]]
    statistics: Dict[str, Dict[str, Optional[float]]]  # statistic -> zoning -> value
    spread: Dict[str, Optional[float]]  # statistic -> max - min across zonings
