# geoscale/io/tables.py
"""
CSV ingestion and export.

Floats are written with 17 significant digits so values read back unchanged.
"""
import io
import logging
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import ValidationError

from geoscale.core.exceptions import InputError
from geoscale.models.maup import CountCell, CountGrid, Zoning
from geoscale.models.series import ValueSeries

logger = logging.getLogger("geoscale.io.tables")

FLOAT_FORMAT = "%.17g"

COUNT_COLUMNS = ["col", "row", "numerator", "denominator"]
ZONE_COLUMNS = ["col", "row", "zone_id"]


def _read(text: str, **kwargs) -> pd.DataFrame:
    try:
        return pd.read_csv(io.StringIO(text), comment="#", skip_blank_lines=True, **kwargs)
    except pd.errors.EmptyDataError:
        raise InputError("CSV input is empty")
    except pd.errors.ParserError as e:
        raise InputError(f"malformed CSV: {e}") from e


def _has_header(text: str, first_column: str) -> bool:
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            return line.split(",")[0].strip().lower() == first_column
    return False


def _numeric(frame: pd.DataFrame, column: str) -> pd.Series:
    values = pd.to_numeric(frame[column], errors="coerce")
    bad = values.isna()
    if bad.any():
        row = int(bad.idxmax())
        raise InputError(f"row {row + 1}: {column} is not a number: {frame[column].iloc[row]!r}")
    return values


def _integral(frame: pd.DataFrame, column: str) -> pd.Series:
    values = _numeric(frame, column)
    bad = ~np.isfinite(values) | (values != np.round(values))
    if bad.any():
        row = int(bad.idxmax())
        raise InputError(f"row {row + 1}: {column} is not an integer: {frame[column].iloc[row]!r}")
    return values.astype(int)


def read_value_series(text: str, label: Optional[str] = None) -> ValueSeries:
    """One positive number per line; lines starting with '#' are comments"""
    frame = _read(text, header=None)
    if frame.shape[1] != 1:
        raise InputError(f"expected one value per line, found {frame.shape[1]} columns")
    values = _numeric(frame, 0)
    try:
        series = ValueSeries(values=values.astype(float).tolist(), label=label)
    except ValidationError as e:
        raise InputError(f"invalid series: {e.errors()[0]['msg']}") from e
    logger.info(f"Read {len(series)} values")
    return series


def read_count_grid(text: str) -> CountGrid:
    """Rows of col,row,numerator,denominator; a header line is optional"""
    header = 0 if _has_header(text, "col") else None
    frame = _read(text, header=header, names=COUNT_COLUMNS if header is None else None)
    missing = [c for c in COUNT_COLUMNS if c not in frame.columns]
    if missing:
        raise InputError(f"count grid CSV is missing columns {missing}")
    for column in COUNT_COLUMNS:
        frame[column] = _integral(frame, column)

    cells: Dict[Tuple[int, int], CountCell] = {}
    for rec in frame.itertuples(index=False):
        cell = (int(rec.col), int(rec.row))
        if cell in cells:
            raise InputError(f"cell {cell} listed twice")
        try:
            cells[cell] = CountCell(numerator=int(rec.numerator), denominator=int(rec.denominator))
        except ValidationError as e:
            raise InputError(f"cell {cell}: {e.errors()[0]['msg']}") from e

    if not cells:
        raise InputError("count grid CSV has no cells")
    try:
        return CountGrid(
            ncols=max(c for c, _ in cells) + 1,
            nrows=max(r for _, r in cells) + 1,
            cells=cells,
        )
    except ValidationError as e:
        raise InputError(f"invalid count grid: {e.errors()[0]['msg']}") from e


def read_zoning(text: str, name: str) -> Zoning:
    """Rows of col,row,zone_id; a header line is optional"""
    header = 0 if _has_header(text, "col") else None
    frame = _read(text, header=header, names=ZONE_COLUMNS if header is None else None,
                  dtype={"zone_id": str})
    missing = [c for c in ZONE_COLUMNS if c not in frame.columns]
    if missing:
        raise InputError(f"zoning CSV is missing columns {missing}")
    cols = _numeric(frame, "col").astype(int)
    rows = _numeric(frame, "row").astype(int)
    assignment = {}
    for c, r, zone in zip(cols, rows, frame["zone_id"].astype(str).str.strip()):
        if (c, r) in assignment:
            raise InputError(f"zoning {name!r} lists cell {(c, r)} twice")
        assignment[(int(c), int(r))] = zone
    return Zoning(name=name, assignment=assignment)


def pairs_csv(rows: Iterable[Sequence[float]], columns: List[str]) -> str:
    """CSV text of numeric rows with a header line"""
    frame = pd.DataFrame(list(rows), columns=columns)
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def series_csv(series: ValueSeries) -> str:
    """One value per line, readable by read_value_series"""
    frame = pd.DataFrame({series.label or "value": series.values})
    return "#" + frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
