import logging
import math

import numpy as np
import pytest
import shapely

from geoscale import datasets
from geoscale.core.exceptions import InputError, NumericalError, TopologyError
from geoscale.models.geometry import Polyline
from geoscale.models.street import NaturalCity, NaturalStreet, StreetSegment
from geoscale.services.arrangement import build_arrangement
from geoscale.services.geometry import transform_polyline
from geoscale.services.scaling_stats import ht_index
from geoscale.services.street_topology import (
    area_series,
    assign_points,
    below_mean,
    blocks_geojson,
    border_numbers,
    check_partition,
    cities_geojson,
    city_center,
    city_hotspots,
    connectivity_graph,
    deflection,
    degree_series,
    extract_blocks,
    natural_cities,
    streets_geojson,
    topological_center,
    trace_natural_streets,
    with_border_numbers,
)


def segment(sid, coords, name=None):
    return StreetSegment(id=sid, geometry=Polyline(vertices=coords), name=name)


def arm(degrees, length=10.0):
    return (length * math.cos(math.radians(degrees)), length * math.sin(math.radians(degrees)))


def moved(segments, degrees=33.0, scale=10.0):
    return [s.model_copy(update={"geometry": transform_polyline(s.geometry, degrees, scale)}) for s in segments]


def edge_sets(streets):
    return sorted(sorted(s.edge_ids) for s in streets)


def blocks_of(segments):
    return extract_blocks(build_arrangement(segments))


def centroid(block):
    c = shapely.Polygon(block.ring).centroid
    return c.x, c.y


# ---------------------------------------------------------------------------
# Natural streets
# ---------------------------------------------------------------------------


def test_deflection():
    assert deflection(0.0, math.pi) == 0.0
    assert deflection(0.0, math.pi / 2) == 90.0
    assert deflection(0.0, 0.0) == 180.0
    assert deflection(math.pi, -math.pi / 2) == 90.0


def test_plus_sign_gives_two_streets(plus_arrangement):
    streets = trace_natural_streets(plus_arrangement)
    assert edge_sets(streets) == [[0, 1], [2, 3]]
    assert [s.length for s in streets] == pytest.approx([2.0, 2.0])
    graph = connectivity_graph(streets, plus_arrangement)
    assert (graph.node_count, graph.link_count) == (2, 1)


def test_block_grid_streets(grid_arrangement):
    streets = trace_natural_streets(grid_arrangement)
    assert len(streets) == 8
    assert {s.name for s in streets} == {f"Row {i}" for i in range(4)} | {f"Col {i}" for i in range(4)}
    graph = connectivity_graph(streets, grid_arrangement)
    assert graph.link_count == 16
    assert set(graph.degrees.values()) == {4}
    assert ht_index(degree_series(graph)) == 1


def test_self_and_every_best_fit_differ():
    # a leaves east; b and d are nearly opposite each other, a and b less so
    a = build_arrangement([
        segment("a", [(0, 0), arm(0)]),
        segment("b", [(0, 0), arm(170)]),
        segment("d", [(0, 0), arm(-12)]),
    ])
    assert edge_sets(trace_natural_streets(a, "every-best-fit")) == [[0], [1, 2]]
    assert edge_sets(trace_natural_streets(a, "self-best-fit")) == [[0, 1], [2]]


def test_same_name_follows_names_through_turns():
    a = build_arrangement([
        segment("a", [(0, 0), (1, 0)], "Main"),
        segment("b", [(1, 0), (1, 1)], "Main"),
        segment("c", [(1, 0), (2, 0)], "Other"),
    ])
    by_name = trace_natural_streets(a, "same-name")
    assert edge_sets(by_name) == [[0, 1], [2]]
    assert [s.name for s in by_name if sorted(s.edge_ids) == [0, 1]] == ["Main"]
    assert edge_sets(trace_natural_streets(a, "every-best-fit")) == [[0, 2], [1]]


def test_angle_threshold():
    a = build_arrangement([
        segment("p", [(0, 0), (1, 0)]),
        segment("q", [(1, 0), (1 + math.cos(math.radians(30)), math.sin(math.radians(30)))]),
    ])
    assert len(trace_natural_streets(a, angle_threshold=45.0)) == 1
    assert len(trace_natural_streets(a, angle_threshold=20.0)) == 2


@pytest.mark.parametrize("threshold", [0.0, 90.0, -5.0])
def test_bad_threshold(plus_arrangement, threshold):
    with pytest.raises(InputError):
        trace_natural_streets(plus_arrangement, angle_threshold=threshold)


def test_unknown_strategy(plus_arrangement):
    with pytest.raises(InputError, match="unknown strategy"):
        trace_natural_streets(plus_arrangement, "longest")


def test_every_edge_in_exactly_one_street(grid_arrangement):
    for strategy in ("every-best-fit", "self-best-fit", "same-name"):
        streets = trace_natural_streets(grid_arrangement, strategy)
        check_partition(streets, grid_arrangement)
        assert sum(len(s.edge_ids) for s in streets) == len(grid_arrangement.edges)


def test_check_partition_rejects_gaps_and_overlaps(plus_arrangement):
    with pytest.raises(TopologyError, match="not covered"):
        check_partition([NaturalStreet(id=0, edge_ids=[0, 1], length=2.0)], plus_arrangement)
    with pytest.raises(TopologyError, match="belongs to streets"):
        connectivity_graph([
            NaturalStreet(id=0, edge_ids=[0, 1], length=2.0),
            NaturalStreet(id=1, edge_ids=[1, 2, 3], length=3.0),
        ], plus_arrangement)


def test_degree_series_skips_isolated_streets(caplog):
    a = build_arrangement(datasets.plus_sign() + [segment("far", [(5, 5), (6, 5)])])
    graph = connectivity_graph(trace_natural_streets(a), a)
    with caplog.at_level(logging.WARNING, logger="geoscale.street_topology"):
        series = degree_series(graph)
    assert series.values == [1.0, 1.0]
    assert "1 isolated streets" in caplog.text


def test_degree_series_all_isolated():
    a = build_arrangement([segment("only", [(0, 0), (1, 0)])])
    with pytest.raises(NumericalError):
        degree_series(connectivity_graph(trace_natural_streets(a), a))


def test_streets_geojson(plus_arrangement):
    streets = trace_natural_streets(plus_arrangement)
    doc = streets_geojson(streets, plus_arrangement, connectivity_graph(streets, plus_arrangement))
    assert len(doc["features"]) == 2
    first = doc["features"][0]
    assert first["geometry"]["coordinates"] == [[-1.0, 0.0], [0.0, 0.0], [1.0, 0.0]]
    assert first["properties"]["degree"] == 1


# ---------------------------------------------------------------------------
# Blocks and border numbers
# ---------------------------------------------------------------------------


def test_grid_blocks(grid_arrangement):
    blocks = extract_blocks(grid_arrangement)
    assert len(blocks) == 9
    assert all(b.area == pytest.approx(1.0) for b in blocks)
    assert sorted(len(b.adjacency) for b in blocks) == [2, 2, 2, 2, 3, 3, 3, 3, 4]


def test_grid_border_numbers(grid_arrangement):
    blocks = extract_blocks(grid_arrangement)
    border = border_numbers(blocks)
    assert sorted(border.values()) == [1] * 8 + [2]
    [center] = topological_center(blocks, border)
    assert centroid(blocks[center]) == pytest.approx((1.5, 1.5))


def test_border_numbers_need_blocks(plus_arrangement):
    assert extract_blocks(plus_arrangement) == []
    with pytest.raises(InputError):
        border_numbers([])
    with pytest.raises(NumericalError):
        area_series([])


def test_blocks_geojson_carries_border_number(grid_arrangement):
    blocks = extract_blocks(grid_arrangement)
    doc = blocks_geojson(with_border_numbers(blocks, border_numbers(blocks)))
    assert sorted(f["properties"]["border_number"] for f in doc["features"]) == [1] * 8 + [2]
    assert all(f["geometry"]["type"] == "Polygon" for f in doc["features"])


# ---------------------------------------------------------------------------
# Natural cities
# ---------------------------------------------------------------------------


def test_one_city_of_small_blocks():
    [city] = natural_cities(blocks_of(datasets.block_strip([1, 1, 1, 10, 10])))
    assert len(city.block_ids) == 3
    assert city.area == pytest.approx(3.0)


def test_large_block_splits_cities():
    cities = natural_cities(blocks_of(datasets.block_strip([1, 1, 10, 1, 10])))
    assert sorted(len(c.block_ids) for c in cities) == [1, 2]


def test_natural_cities_need_two_blocks():
    with pytest.raises(InputError):
        natural_cities(blocks_of([segment("ring", [(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)])]))


def test_hotspots_are_nested():
    blocks = blocks_of(datasets.block_strip([1, 1, 2, 10, 10, 10]))
    [city] = natural_cities(blocks)
    assert city.area == pytest.approx(4.0)
    area = {b.id: b.area for b in blocks}
    [level] = city_hotspots(city, blocks)
    assert sorted(area[i] for i in level) == pytest.approx([1.0, 1.0])


def test_city_center_of_whole_grid(grid_arrangement):
    blocks = extract_blocks(grid_arrangement)
    city = NaturalCity(id=0, block_ids=[b.id for b in blocks], area=9.0)
    [center] = city_center(city, blocks)
    assert centroid(blocks[center]) == pytest.approx((1.5, 1.5))


def test_cities_geojson_unions_blocks():
    blocks = blocks_of(datasets.block_strip([1, 1, 1, 10, 10]))
    doc = cities_geojson(natural_cities(blocks), blocks)
    [feature] = doc["features"]
    assert shapely.geometry.shape(feature["geometry"]).area == pytest.approx(3.0)


def test_assign_points(grid_arrangement):
    blocks = extract_blocks(grid_arrangement)
    owner = {tuple(np.round(centroid(b), 6)): b.id for b in blocks}
    a, b = owner[(0.5, 0.5)], owner[(1.5, 0.5)]
    counts = assign_points(blocks, [(0.5, 0.5), (1.0, 0.5), (10.0, 10.0)])
    assert sum(counts.values()) == 2
    assert counts[min(a, b)] == (2 if min(a, b) == a else 1)
    assert counts[max(a, b)] == (0 if max(a, b) == b else 1)


# ---------------------------------------------------------------------------
# Invariance under rotation and scaling
# ---------------------------------------------------------------------------


def test_streets_survive_rotation_and_scaling():
    base = build_arrangement(datasets.block_grid(3, 3))
    turned = build_arrangement(moved(datasets.block_grid(3, 3)))
    a, b = trace_natural_streets(base), trace_natural_streets(turned)
    assert edge_sets(a) == edge_sets(b)
    assert sorted(s.length * 10 for s in a) == pytest.approx(sorted(s.length for s in b))


def test_blocks_survive_rotation_and_scaling():
    base = blocks_of(datasets.block_grid(3, 3))
    turned = blocks_of(moved(datasets.block_grid(3, 3)))
    assert sorted(border_numbers(base).values()) == sorted(border_numbers(turned).values())
    assert sorted(b.area * 100 for b in base) == pytest.approx(sorted(b.area for b in turned))


def test_cities_survive_rotation_and_scaling():
    widths = [1, 1, 10, 1, 10]
    base = natural_cities(blocks_of(datasets.block_strip(widths)))
    turned = natural_cities(blocks_of(moved(datasets.block_strip(widths))))
    assert sorted(len(c.block_ids) for c in base) == sorted(len(c.block_ids) for c in turned)
    assert sorted(c.area * 100 for c in base) == pytest.approx(sorted(c.area for c in turned))


def test_area_equal_to_mean_is_not_below():
    assert below_mean(1.0, 2.0)
    assert not below_mean(2.0, 2.0)
    assert not below_mean(12.000000000000002, 12.000000000000004)
    assert not below_mean(0.11999999999999997, 0.12000000000000001)


@pytest.mark.parametrize("degrees, scale", [(0.0, 1.0), (33.0, 10.0), (33.0, 0.1), (117.0, 0.1)])
def test_mean_tie_block_stays_out_of_cities(degrees, scale):
    # mean area 2: the width-2 block ties and separates the two small blocks
    blocks = blocks_of(moved(datasets.block_strip([1, 2, 1, 4]), degrees, scale))
    cities = natural_cities(blocks)
    assert [len(c.block_ids) for c in cities] == [1, 1]
    assert [c.area for c in cities] == pytest.approx([scale ** 2] * 2)


@pytest.mark.parametrize("degrees, scale", [(0.0, 1.0), (33.0, 10.0), (33.0, 0.1)])
def test_mean_tie_block_stays_out_of_hotspots(degrees, scale):
    blocks = blocks_of(moved(datasets.block_strip([1, 1, 2, 4]), degrees, scale))
    city = NaturalCity(id=0, block_ids=[b.id for b in blocks], area=8 * scale ** 2)
    area = {b.id: b.area for b in blocks}
    [level] = city_hotspots(city, blocks)
    assert sorted(area[i] for i in level) == pytest.approx([scale ** 2] * 2)


def test_no_hotspots_on_equal_areas(grid_arrangement):
    blocks = extract_blocks(grid_arrangement)
    city = NaturalCity(id=0, block_ids=[b.id for b in blocks], area=9.0)
    assert city_hotspots(city, blocks) == []


def test_no_hotspots_in_single_block_city(grid_arrangement):
    blocks = extract_blocks(grid_arrangement)
    city = NaturalCity(id=0, block_ids=[blocks[0].id], area=1.0)
    assert city_hotspots(city, blocks) == []


def test_hotspots_of_two_small_and_one_large_block():
    blocks = blocks_of(datasets.block_strip([1, 1, 8]))
    area = {b.id: b.area for b in blocks}
    city = NaturalCity(id=0, block_ids=[b.id for b in blocks], area=10.0)
    [level] = city_hotspots(city, blocks)
    assert sorted(area[i] for i in level) == pytest.approx([1.0, 1.0])


def test_strip_blocks_all_touch_the_border():
    blocks = blocks_of(datasets.block_strip([1, 1, 1, 1, 1]))
    border = border_numbers(blocks)
    assert sorted(border.values()) == [1] * 5
    assert topological_center(blocks, border) == {b.id for b in blocks}
    city = NaturalCity(id=0, block_ids=[b.id for b in blocks], area=5.0)
    assert city_center(city, blocks) == {b.id for b in blocks}
