# geoscale/io/ascii_grid.py
"""Esri ASCII grid reader and writer"""
import logging
from typing import Dict, List

import numpy as np

from geoscale.core.exceptions import InputError
from geoscale.models.geometry import DEFAULT_NODATA, Point2D, RasterGrid

logger = logging.getLogger("geoscale.io.ascii_grid")

REQUIRED_KEYS = ("ncols", "nrows", "cellsize")
COUNT_KEYS = ("ncols", "nrows")
HEADER_KEYS = ("ncols", "nrows", "xllcorner", "yllcorner", "xllcenter", "yllcenter",
               "cellsize", "nodata_value")


def _parse_number(token: str, where: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise InputError(f"{where}: not a number: {token!r}")


def _parse_count(token: str, where: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise InputError(f"{where}: not an integer: {token!r}")


def parse_ascii_grid(text: str) -> RasterGrid:
    """
    Parse an Esri ASCII grid.

    Header keys are case-insensitive; xllcenter/yllcenter are accepted and
    converted to corner coordinates. Body row 0 is the northernmost row.
    """
    lines = [line.strip() for line in text.splitlines()]
    lines = [line for line in lines if line]

    header: Dict[str, float] = {}
    counts: Dict[str, int] = {}
    body_start = 0
    for index, line in enumerate(lines):
        parts = line.split()
        key = parts[0].lower()
        if key not in HEADER_KEYS:
            body_start = index
            break
        if len(parts) != 2:
            raise InputError(f"line {index + 1}: header '{parts[0]}' needs exactly one value")
        if key in COUNT_KEYS:
            counts[key] = _parse_count(parts[1], f"line {index + 1}")
        header[key] = _parse_number(parts[1], f"line {index + 1}")
    else:
        body_start = len(lines)

    for key in REQUIRED_KEYS:
        if key not in header:
            raise InputError(f"missing header key: {key}")
    if ("xllcorner" in header) == ("xllcenter" in header):
        raise InputError("missing header key: xllcorner (or xllcenter)")
    if ("yllcorner" in header) == ("yllcenter" in header):
        raise InputError("missing header key: yllcorner (or yllcenter)")

    ncols, nrows = counts["ncols"], counts["nrows"]
    cell_size = header["cellsize"]
    if ncols < 1 or nrows < 1 or not np.isfinite(cell_size) or cell_size <= 0:
        raise InputError(f"invalid grid header: ncols={ncols} nrows={nrows} cellsize={cell_size}")

    x0 = header["xllcorner"] if "xllcorner" in header else header["xllcenter"] - cell_size / 2
    y0 = header["yllcorner"] if "yllcorner" in header else header["yllcenter"] - cell_size / 2

    rows: List[List[float]] = []
    for offset, line in enumerate(lines[body_start:]):
        line_no = body_start + offset + 1
        values = [_parse_number(tok, f"line {line_no}") for tok in line.split()]
        if len(values) != ncols:
            raise InputError(
                f"dimension mismatch: line {line_no} has {len(values)} values, header says ncols {ncols}"
            )
        rows.append(values)
    if len(rows) != nrows:
        raise InputError(f"dimension mismatch: body has {len(rows)} rows, header says nrows {nrows}")

    grid = RasterGrid(
        ncols=ncols,
        nrows=nrows,
        origin=Point2D(x=x0, y=y0),
        cell_size=cell_size,
        nodata=header.get("nodata_value", DEFAULT_NODATA),
        values=np.array(rows, dtype=float),
    )
    logger.info(f"Parsed {nrows}x{ncols} grid, cell size {cell_size}, "
                f"{int((~grid.valid_mask).sum())} nodata cells")
    return grid


def _fmt(value: float) -> str:
    return repr(float(value))


def write_ascii_grid(grid: RasterGrid) -> str:
    """Serialize a grid with full-precision numbers"""
    lines = [
        f"ncols {grid.ncols}",
        f"nrows {grid.nrows}",
        f"xllcorner {_fmt(grid.origin.x)}",
        f"yllcorner {_fmt(grid.origin.y)}",
        f"cellsize {_fmt(grid.cell_size)}",
        f"NODATA_value {_fmt(grid.nodata)}",
    ]
    for row in grid.values:
        lines.append(" ".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"
