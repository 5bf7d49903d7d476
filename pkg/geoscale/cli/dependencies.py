# geoscale/cli/dependencies.py
import json
import logging
from pathlib import Path
from typing import Any, List, Optional, Tuple

import click
from pydantic import ValidationError

from geoscale.core.config import settings
from geoscale.core.exceptions import InputError
from geoscale.io.geojson import parse_geojson_subset
from geoscale.models.cli import CommandConfig
from geoscale.models.fractal import ScaleSeries
from geoscale.models.geometry import GeoFeature, Polygon, Polyline
from geoscale.models.street import StreetSegment

logger = logging.getLogger("geoscale.cli")


def command_config(subcommand: str, inputs=(), outputs=None, **flags) -> CommandConfig:
    """Flags over settings; the settings already carry --config and the environment"""
    try:
        return CommandConfig.resolve(subcommand, settings, inputs=inputs, outputs=outputs, **flags)
    except ValidationError as e:
        raise InputError(f"invalid {subcommand} parameters: {e.errors()[0]['msg']}") from e


def read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise InputError(f"{path} is not UTF-8 text") from e


def write_text(path: Optional[str], text: str) -> None:
    if path is None:
        return
    Path(path).write_text(text, encoding="utf-8")
    logger.info(f"Wrote {path}")


def parse_floats(text: str, option: str) -> List[float]:
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise InputError(f"{option}: expected comma-separated numbers, got {text!r}")
    if not values:
        raise InputError(f"{option}: no values given")
    return values


def parse_ints(text: str, option: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise InputError(f"{option}: expected comma-separated integers, got {text!r}")


def parse_scales(text: str, option: str) -> ScaleSeries:
    try:
        return ScaleSeries.of(parse_floats(text, option))
    except ValidationError as e:
        raise InputError(f"{option}: {e.errors()[0]['msg']}") from e


def parse_anchor(text: Optional[str]) -> Tuple[float, float]:
    if text is None:
        return (0.0, 0.0)
    values = parse_floats(text, "--anchor")
    if len(values) != 2:
        raise InputError(f"--anchor: expected dx,dy, got {text!r}")
    return values[0], values[1]


def load_features(path: str) -> List[GeoFeature]:
    return parse_geojson_subset(read_text(path))


def first_polyline(features: List[GeoFeature]) -> Polyline:
    """First curve in the file; a polygon contributes its exterior ring"""
    for feature in features:
        if isinstance(feature.geometry, Polyline):
            return feature.geometry
        if isinstance(feature.geometry, Polygon):
            return Polyline(vertices=feature.geometry.exterior)
    raise InputError("input holds no LineString or Polygon")


def first_polygon(features: List[GeoFeature]) -> Polygon:
    for feature in features:
        if isinstance(feature.geometry, Polygon):
            return feature.geometry
    raise InputError("input holds no Polygon")


def street_segments(features: List[GeoFeature]) -> List[StreetSegment]:
    """Line features as street segments; ids are their position in the file"""
    segments = []
    for i, feature in enumerate(features):
        if not isinstance(feature.geometry, Polyline):
            logger.warning(f"Skipping non-line feature {i}")
            continue
        segments.append(StreetSegment(id=str(i), geometry=feature.geometry, name=feature.name))
    if not segments:
        raise InputError("input holds no LineString features")
    return segments


def echo_json(payload: Any) -> None:
    click.echo(json.dumps(payload, indent=1))
