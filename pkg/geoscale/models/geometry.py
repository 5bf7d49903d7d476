# geoscale/models/geometry.py
import math
from typing import Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator
from shapely.geometry import LinearRing, Polygon as ShapelyPolygon
from shapely.geometry.polygon import orient

# Pydantic models for planar geometry and gridded data

DEFAULT_NODATA = -9999.0


def as_coordinate_array(value) -> np.ndarray:
    """Coerce a sequence of (x, y) pairs into a float (n, 2) array"""
    arr = np.array(value, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"expected a sequence of (x, y) pairs, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("coordinates must be finite")
    return arr


def snap_tolerance_for(coords: np.ndarray, factor: float = 1e-9) -> float:
    """Snap tolerance relative to the bounding-box diagonal of coords"""
    span = coords.max(axis=0) - coords.min(axis=0)
    diagonal = float(math.hypot(span[0], span[1]))
    return factor * diagonal if diagonal > 0 else factor


class Point2D(BaseModel):
    model_config = ConfigDict(frozen=True)

    x: float = Field(allow_inf_nan=False)
    y: float = Field(allow_inf_nan=False)

    def as_tuple(self) -> tuple:
        return (self.x, self.y)


class Polyline(BaseModel):
    """Open planar curve; vertices are kept as an (n, 2) float array"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    vertices: np.ndarray

    @field_validator("vertices", mode="before")
    @classmethod
    def coerce_vertices(cls, v):
        arr = as_coordinate_array(v)
        if len(arr) < 2:
            raise ValueError("a polyline needs at least 2 vertices")
        steps = np.hypot(*np.diff(arr, axis=0).T)
        tol = snap_tolerance_for(arr)
        if np.any(steps <= tol):
            index = int(np.argmax(steps <= tol))
            raise ValueError(f"consecutive vertices {index} and {index + 1} are identical")
        arr.setflags(write=False)
        return arr

    @field_serializer("vertices")
    def dump_vertices(self, v: np.ndarray):
        return v.tolist()

    @property
    def start(self) -> Point2D:
        return Point2D(x=self.vertices[0, 0], y=self.vertices[0, 1])

    @property
    def end(self) -> Point2D:
        return Point2D(x=self.vertices[-1, 0], y=self.vertices[-1, 1])

    def __len__(self) -> int:
        return len(self.vertices)

    def __eq__(self, other) -> bool:
        return isinstance(other, Polyline) and np.array_equal(self.vertices, other.vertices)


def _close_ring(arr: np.ndarray) -> np.ndarray:
    if not np.array_equal(arr[0], arr[-1]):
        arr = np.vstack([arr, arr[:1]])
    return arr


class Polygon(BaseModel):
    """
    Simple polygon with optional holes.

    Rings are stored closed (first == last). Orientation is normalized on
    construction: exterior counterclockwise, holes clockwise.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    exterior: np.ndarray
    holes: List[np.ndarray] = []

    @field_validator("exterior", mode="before")
    @classmethod
    def coerce_exterior(cls, v):
        return _close_ring(as_coordinate_array(v))

    @field_validator("holes", mode="before")
    @classmethod
    def coerce_holes(cls, v):
        return [_close_ring(as_coordinate_array(ring)) for ring in (v or [])]

    @model_validator(mode="after")
    def normalize(self):
        if len(self.exterior) < 4:
            raise ValueError("a polygon ring needs at least 3 distinct vertices")
        if ShapelyPolygon(self.exterior).area <= 0:
            raise ValueError("degenerate exterior ring (zero area)")
        if not LinearRing(self.exterior).is_simple:
            raise ValueError("exterior ring is self-intersecting")
        shape = ShapelyPolygon(self.exterior, self.holes)
        shape = orient(shape, sign=1.0)
        exterior = np.asarray(shape.exterior.coords, dtype=float)
        holes = [np.asarray(ring.coords, dtype=float) for ring in shape.interiors]
        for arr in [exterior, *holes]:
            arr.setflags(write=False)
        # frozen model: bypass __setattr__ for the normalized rings
        object.__setattr__(self, "exterior", exterior)
        object.__setattr__(self, "holes", holes)
        return self

    @field_serializer("exterior")
    def dump_exterior(self, v: np.ndarray):
        return v.tolist()

    @field_serializer("holes")
    def dump_holes(self, v: List[np.ndarray]):
        return [ring.tolist() for ring in v]

    def to_shapely(self) -> ShapelyPolygon:
        return ShapelyPolygon(self.exterior, self.holes)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polygon)
            and np.array_equal(self.exterior, other.exterior)
            and len(self.holes) == len(other.holes)
            and all(np.array_equal(a, b) for a, b in zip(self.holes, other.holes))
        )


Geometry = Union[Polyline, Polygon]


class GeoFeature(BaseModel):
    """A parsed geometry together with its string-valued properties"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    geometry: Union[Polyline, Polygon]
    properties: Dict[str, str] = {}

    @property
    def name(self) -> Optional[str]:
        name = self.properties.get("name")
        return name if name else None


class RasterGrid(BaseModel):
    """
    Regular grid of elevation or occupancy values.

    values[0] is the northernmost row; origin is the lower-left corner of the
    lower-left cell.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    ncols: int = Field(ge=1)
    nrows: int = Field(ge=1)
    origin: Point2D = Point2D(x=0.0, y=0.0)
    cell_size: float = Field(gt=0, allow_inf_nan=False)
    nodata: float = DEFAULT_NODATA
    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def coerce_values(cls, v):
        arr = np.array(v, dtype=float)
        if arr.ndim != 2:
            raise ValueError(f"values must be a 2-D matrix, got {arr.ndim} dimensions")
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def check_shape(self):
        if self.values.shape != (self.nrows, self.ncols):
            raise ValueError(
                f"values matrix is {self.values.shape[0]}x{self.values.shape[1]}, "
                f"header says {self.nrows}x{self.ncols}"
            )
        return self

    @field_serializer("values")
    def dump_values(self, v: np.ndarray):
        return v.tolist()

    @property
    def valid_mask(self) -> np.ndarray:
        """True where the cell holds data"""
        return np.isfinite(self.values) & (self.values != self.nodata)

    def cell_centers(self):
        """Return (x, y) center coordinate arrays shaped like values"""
        cols = self.origin.x + (np.arange(self.ncols) + 0.5) * self.cell_size
        rows = self.origin.y + (self.nrows - np.arange(self.nrows) - 0.5) * self.cell_size
        return np.meshgrid(cols, rows)

    def with_values(self, values: np.ndarray, **changes) -> "RasterGrid":
        """Copy of this grid with new values (and optionally other fields)"""
        fields = {
            "ncols": self.ncols,
            "nrows": self.nrows,
            "origin": self.origin,
            "cell_size": self.cell_size,
            "nodata": self.nodata,
        }
        fields.update(changes)
        return RasterGrid(values=values, **fields)
