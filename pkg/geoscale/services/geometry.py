# geoscale/services/geometry.py
import math
from typing import Tuple, Union

import numpy as np

from geoscale.core.exceptions import GeometryError
from geoscale.models.geometry import Polygon, Polyline

Box = Tuple[float, float, float, float]


def polyline_length(p: Polyline) -> float:
    """Sum of Euclidean distances between consecutive vertices"""
    steps = np.diff(p.vertices, axis=0)
    return float(np.hypot(steps[:, 0], steps[:, 1]).sum())


def ring_signed_area(ring: np.ndarray) -> float:
    """Shoelace signed area of a closed ring; positive when counterclockwise"""
    x, y = ring[:, 0], ring[:, 1]
    # shift to the first vertex to limit cancellation on large coordinates
    x = x - x[0]
    y = y - y[0]
    return 0.5 * float(np.dot(x[:-1], y[1:]) - np.dot(x[1:], y[:-1]))


def polygon_area(poly: Polygon) -> float:
    """Exterior area minus hole areas"""
    outer = abs(ring_signed_area(poly.exterior))
    if outer <= 0:
        raise GeometryError("degenerate ring: polygon area is zero")
    area = outer - sum(abs(ring_signed_area(hole)) for hole in poly.holes)
    if area <= 0:
        raise GeometryError("holes cover the whole exterior")
    return area


def bounding_box(geometry: Union[Polyline, Polygon]) -> Box:
    """(minx, miny, maxx, maxy) of a polyline or a polygon exterior"""
    coords = geometry.vertices if isinstance(geometry, Polyline) else geometry.exterior
    lo = coords.min(axis=0)
    hi = coords.max(axis=0)
    return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])


def box_diagonal(box: Box) -> float:
    return math.hypot(box[2] - box[0], box[3] - box[1])


def rotate_coords(coords: np.ndarray, degrees: float, about: Tuple[float, float] = (0.0, 0.0)) -> np.ndarray:
    """Rotate an (n, 2) coordinate array counterclockwise about a point"""
    theta = math.radians(degrees)
    c, s = math.cos(theta), math.sin(theta)
    shifted = np.asarray(coords, dtype=float) - about
    rotated = shifted @ np.array([[c, s], [-s, c]])
    return rotated + about


def transform_polyline(p: Polyline, degrees: float = 0.0, scale: float = 1.0,
                       offset: Tuple[float, float] = (0.0, 0.0)) -> Polyline:
    """Rotate about the origin, scale uniformly, then translate"""
    coords = rotate_coords(p.vertices, degrees) * scale + np.asarray(offset, dtype=float)
    return Polyline(vertices=coords)

