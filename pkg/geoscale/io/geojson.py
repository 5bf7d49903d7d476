# geoscale/io/geojson.py
"""
GeoJSON (RFC 7946) subset: LineString, MultiLineString and Polygon.

Coordinates are taken as planar Cartesian values; nothing is projected.
"""
import json
import logging
from typing import Any, Dict, Iterable, List, Optional

from pydantic import ValidationError

from geoscale.core.exceptions import GeometryError, InputError
from geoscale.models.geometry import GeoFeature, Polygon, Polyline

logger = logging.getLogger("geoscale.io.geojson")

SUPPORTED_TYPES = ("LineString", "MultiLineString", "Polygon")


def _stringify(properties: Optional[Dict[str, Any]]) -> Dict[str, str]:
    if not properties:
        return {}
    return {
        str(key): value if isinstance(value, str) else json.dumps(value)
        for key, value in properties.items()
        if value is not None
    }


def _geometries(geometry: Dict[str, Any]) -> List[Any]:
    geom_type = geometry.get("type")
    coords = geometry.get("coordinates")
    if geom_type not in SUPPORTED_TYPES:
        raise InputError(f"unsupported geometry: {geom_type}")
    if coords is None:
        raise InputError(f"{geom_type} without coordinates")

    try:
        if geom_type == "LineString":
            return [Polyline(vertices=[c[:2] for c in coords])]
        if geom_type == "MultiLineString":
            return [Polyline(vertices=[c[:2] for c in part]) for part in coords]
        rings = [[c[:2] for c in ring] for ring in coords]
        if not rings:
            raise InputError("Polygon without rings")
        return [Polygon(exterior=rings[0], holes=rings[1:])]
    except ValidationError as e:
        raise GeometryError(f"invalid {geom_type}: {e.errors()[0]['msg']}") from e
    except (TypeError, IndexError) as e:
        raise InputError(f"malformed {geom_type} coordinates: {e}") from e


def _looks_geographic(features: List[GeoFeature]) -> bool:
    for feature in features:
        geom = feature.geometry
        coords = geom.vertices if isinstance(geom, Polyline) else geom.exterior
        if (abs(coords[:, 0]) > 180).any() or (abs(coords[:, 1]) > 90).any():
            return False
    return bool(features)


def parse_geojson_subset(text: str) -> List[GeoFeature]:
    """
    Parse a FeatureCollection, a Feature or a bare geometry.

    Properties are kept as key -> string maps (non-string values are JSON encoded).
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(
            f"malformed GeoJSON at line {e.lineno} column {e.colno} (char {e.pos}): {e.msg}"
        ) from e

    if not isinstance(doc, dict) or "type" not in doc:
        raise InputError("GeoJSON document must be an object with a 'type' member")

    if doc["type"] == "FeatureCollection":
        raw_features = doc.get("features") or []
    elif doc["type"] == "Feature":
        raw_features = [doc]
    else:
        raw_features = [{"type": "Feature", "geometry": doc, "properties": {}}]

    if not isinstance(raw_features, list):
        raise InputError("FeatureCollection 'features' must be an array")

    features: List[GeoFeature] = []
    for index, raw in enumerate(raw_features):
        if not isinstance(raw, dict):
            raise InputError(f"feature {index}: expected an object, got {type(raw).__name__}")
        geometry = raw.get("geometry")
        if geometry is None:
            logger.debug("Skipping feature without geometry")
            continue
        if not isinstance(geometry, dict):
            raise InputError(f"feature {index}: geometry must be an object")
        raw_properties = raw.get("properties")
        if raw_properties is not None and not isinstance(raw_properties, dict):
            raise InputError(f"feature {index}: properties must be an object or null")
        properties = _stringify(raw_properties)
        for geom in _geometries(geometry):
            features.append(GeoFeature(geometry=geom, properties=properties))

    if "crs" not in doc and _looks_geographic(features):
        logger.warning(
            "Coordinates fall inside lon/lat bounds; they are treated as planar. "
            "Project geographic data to a metric CRS first."
        )

    logger.info(f"Parsed {len(features)} geometries from GeoJSON")
    return features


def geometry_mapping(geometry) -> Dict[str, Any]:
    """GeoJSON geometry dict of a Polyline or Polygon"""
    if isinstance(geometry, Polyline):
        return {"type": "LineString", "coordinates": geometry.vertices.tolist()}
    rings = [geometry.exterior.tolist()] + [hole.tolist() for hole in geometry.holes]
    return {"type": "Polygon", "coordinates": rings}


def feature_collection(features: Iterable[Dict[str, Any]]) -> Dict[str, Any]:
    return {"type": "FeatureCollection", "features": list(features)}


def make_feature(geometry: Dict[str, Any], properties: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    return {"type": "Feature", "geometry": geometry, "properties": properties or {}}


def serialize_geojson(features: Iterable[GeoFeature]) -> str:
    """
    Write features as a FeatureCollection.

    json encodes floats with their shortest round-trip repr, so parsing the
    output gives back identical coordinates.
    """
    collection = feature_collection(
        make_feature(geometry_mapping(f.geometry), dict(f.properties)) for f in features
    )
    return json.dumps(collection)


def dump_collection(collection: Dict[str, Any]) -> str:
    return json.dumps(collection, indent=1)
