import json
import logging

import numpy as np
import pytest

from geoscale.core.exceptions import GeometryError, InputError
from geoscale.io.ascii_grid import parse_ascii_grid, write_ascii_grid
from geoscale.io.geojson import parse_geojson_subset, serialize_geojson
from geoscale.io.tables import (
    pairs_csv,
    read_count_grid,
    read_value_series,
    read_zoning,
    series_csv,
)
from geoscale.models.geometry import Polygon, Polyline
from geoscale.models.series import ValueSeries

# ---------------------------------------------------------------------------
# GeoJSON
# ---------------------------------------------------------------------------

PROJECTED = {"type": "name", "properties": {"name": "EPSG:27700"}}


def collection(*features, crs=PROJECTED):
    doc = {"type": "FeatureCollection", "features": list(features)}
    if crs:
        doc["crs"] = crs
    return json.dumps(doc)


def feature(geometry, **properties):
    return {"type": "Feature", "geometry": geometry, "properties": properties}


def test_linestring_feature_with_properties():
    text = collection(feature({"type": "LineString", "coordinates": [[0, 0], [10, 0], [10, 5]]},
                              name="High Street", lanes=2))
    [f] = parse_geojson_subset(text)
    assert isinstance(f.geometry, Polyline)
    assert len(f.geometry) == 3
    assert f.name == "High Street"
    assert f.properties["lanes"] == "2"


def test_multilinestring_yields_one_polyline_per_part():
    geometry = {"type": "MultiLineString", "coordinates": [[[0, 0], [1, 0]], [[2, 0], [3, 1]]]}
    features = parse_geojson_subset(collection(feature(geometry, name="A")))
    assert len(features) == 2
    assert all(f.name == "A" for f in features)


def test_polygon_with_hole():
    geometry = {
        "type": "Polygon",
        "coordinates": [
            [[0, 0], [10, 0], [10, 10], [0, 10], [0, 0]],
            [[2, 2], [2, 4], [4, 4], [4, 2], [2, 2]],
        ],
    }
    [f] = parse_geojson_subset(collection(feature(geometry)))
    assert isinstance(f.geometry, Polygon)
    assert len(f.geometry.holes) == 1


def test_bare_geometry_is_accepted():
    [f] = parse_geojson_subset(json.dumps({"type": "LineString", "coordinates": [[500, 0], [600, 0]]}))
    assert f.properties == {}


def test_unsupported_geometry():
    with pytest.raises(InputError, match="unsupported geometry: Point"):
        parse_geojson_subset(collection(feature({"type": "Point", "coordinates": [0, 0]})))


def test_malformed_json_reports_position():
    with pytest.raises(InputError, match="line 1 column"):
        parse_geojson_subset('{"type": "FeatureCollection", "features": [}')


def test_invalid_polygon_is_a_geometry_error():
    geometry = {"type": "Polygon", "coordinates": [[[0, 0], [1, 0], [2, 0], [0, 0]]]}
    with pytest.raises(GeometryError):
        parse_geojson_subset(collection(feature(geometry)))


LINE = {"type": "LineString", "coordinates": [[0, 0], [1, 0]]}


@pytest.mark.parametrize("doc, message", [
    ({"type": "FeatureCollection", "features": [1]}, "feature 0: expected an object"),
    ({"type": "FeatureCollection", "features": {"a": 1}}, "must be an array"),
    ({"type": "FeatureCollection", "features": [{"type": "Feature", "geometry": [1]}]},
     "feature 0: geometry must be an object"),
    ({"type": "FeatureCollection", "features": [feature(LINE), {"type": "Feature", "geometry": LINE,
                                                                "properties": [1]}]},
     "feature 1: properties must be an object"),
])
def test_malformed_structure_is_an_input_error(doc, message):
    with pytest.raises(InputError, match=message):
        parse_geojson_subset(json.dumps(doc))


def test_null_properties_are_empty():
    doc = {"type": "Feature", "geometry": LINE, "properties": None, "crs": PROJECTED}
    [f] = parse_geojson_subset(json.dumps(doc))
    assert f.properties == {}


def test_geographic_coordinates_warn(caplog):
    text = collection(feature({"type": "LineString", "coordinates": [[-0.12, 51.5], [-0.11, 51.51]]}), crs=None)
    with caplog.at_level(logging.WARNING, logger="geoscale.io.geojson"):
        parse_geojson_subset(text)
    assert "lon/lat" in caplog.text


def test_projected_coordinates_do_not_warn(caplog):
    text = collection(feature({"type": "LineString", "coordinates": [[530000, 180000], [530100, 180050]]}),
                      crs=None)
    with caplog.at_level(logging.WARNING, logger="geoscale.io.geojson"):
        parse_geojson_subset(text)
    assert caplog.text == ""


def test_serialized_features_parse_back_identically():
    original = parse_geojson_subset(collection(
        feature({"type": "LineString", "coordinates": [[0.1, 0.2], [1 / 3, 2 / 7]]}, name="x"),
        feature({"type": "Polygon", "coordinates": [[[0, 0], [1, 0], [0.5, 0.9], [0, 0]]]}),
    ))
    again = parse_geojson_subset(serialize_geojson(original))
    assert again == original


# ---------------------------------------------------------------------------
# Esri ASCII grid
# ---------------------------------------------------------------------------

GRID = """ncols 3
nrows 2
xllcorner 100.0
yllcorner 200.0
cellsize 10
NODATA_value -9999
1 2 3
4 -9999 6
"""


def test_parse_ascii_grid():
    grid = parse_ascii_grid(GRID)
    assert (grid.nrows, grid.ncols) == (2, 3)
    assert grid.origin.as_tuple() == (100.0, 200.0)
    assert grid.values[0].tolist() == [1.0, 2.0, 3.0]
    assert int((~grid.valid_mask).sum()) == 1


def test_header_keys_are_case_insensitive_and_centers_convert():
    text = GRID.replace("xllcorner 100.0", "XLLCENTER 105.0").replace("yllcorner 200.0", "YllCenter 205.0")
    grid = parse_ascii_grid(text)
    assert grid.origin.as_tuple() == (100.0, 200.0)


def test_missing_header_key():
    with pytest.raises(InputError, match="missing header key: cellsize"):
        parse_ascii_grid(GRID.replace("cellsize 10\n", ""))


def test_row_length_mismatch():
    with pytest.raises(InputError, match="dimension mismatch"):
        parse_ascii_grid(GRID.replace("4 -9999 6", "4 6"))


def test_row_count_mismatch():
    with pytest.raises(InputError, match="nrows 2"):
        parse_ascii_grid(GRID + "7 8 9\n")


@pytest.mark.parametrize("ncols", ["nan", "inf", "3.7", "3.0", "three"])
def test_grid_size_must_be_an_integer(ncols):
    with pytest.raises(InputError, match="not an integer"):
        parse_ascii_grid(GRID.replace("ncols 3", f"ncols {ncols}"))


@pytest.mark.parametrize("header", ["nrows 0", "nrows -2"])
def test_grid_size_must_be_positive(header):
    with pytest.raises(InputError, match="invalid grid header"):
        parse_ascii_grid(GRID.replace("nrows 2", header))


def test_cell_size_must_be_finite():
    with pytest.raises(InputError, match="invalid grid header"):
        parse_ascii_grid(GRID.replace("cellsize 10", "cellsize nan"))


def test_written_grid_parses_back():
    grid = parse_ascii_grid(GRID)
    again = parse_ascii_grid(write_ascii_grid(grid))
    assert np.array_equal(again.values, grid.values)
    assert again.origin == grid.origin
    assert again.nodata == grid.nodata


# ---------------------------------------------------------------------------
# CSV tables
# ---------------------------------------------------------------------------


def test_read_value_series_skips_comments():
    series = read_value_series("# block areas\n3.5\n1\n\n2.25\n")
    assert series.values == [3.5, 1.0, 2.25]


def test_read_value_series_rejects_non_positive():
    with pytest.raises(InputError, match="positive"):
        read_value_series("1\n0\n")


def test_read_value_series_rejects_text():
    with pytest.raises(InputError, match="not a number"):
        read_value_series("1\nabc\n")


def test_series_csv_reads_back():
    series = ValueSeries(values=[0.1, 1 / 3, 7.0], label="area")
    assert read_value_series(series_csv(series)).values == series.values


def test_read_count_grid_with_and_without_header():
    body = "0,0,1,10\n1,0,2,10\n0,1,3,10\n1,1,4,10\n"
    with_header = read_count_grid("col,row,numerator,denominator\n" + body)
    without = read_count_grid(body)
    assert with_header == without
    assert (with_header.ncols, with_header.nrows) == (2, 2)
    assert with_header.cells[(1, 1)].numerator == 4


def test_read_count_grid_rejects_gap():
    with pytest.raises(InputError, match="missing cells"):
        read_count_grid("0,0,1,10\n1,1,4,10\n")


def test_read_count_grid_rejects_numerator_above_denominator():
    with pytest.raises(InputError, match="exceeds"):
        read_count_grid("0,0,11,10\n")


@pytest.mark.parametrize("body", ["0,0,1.5,10\n", "0,0,1,10.25\n", "0.5,0,1,10\n", "0,0,inf,10\n"])
def test_read_count_grid_rejects_fractional_values(body):
    with pytest.raises(InputError, match="not an integer"):
        read_count_grid(body)


def test_read_count_grid_accepts_whole_floats():
    grid = read_count_grid("0,0,1.0,10.0\n")
    assert grid.cells[(0, 0)].numerator == 1


def test_read_zoning_keeps_zone_ids_as_text():
    zoning = read_zoning("col,row,zone_id\n0,0,01\n1,0,02\n", "z")
    assert zoning.assignment == {(0, 0): "01", (1, 0): "02"}


def test_pairs_csv_full_precision():
    text = pairs_csv([(1 / 3, 2.0)], ["yardstick", "length"])
    lines = text.splitlines()
    assert lines[0] == "yardstick,length"
    assert float(lines[1].split(",")[0]) == 1 / 3
