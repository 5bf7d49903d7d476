# geoscale/cli/commands/streets.py
import json
import logging
from typing import Callable, Optional

import click

from geoscale.cli.dependencies import command_config, echo_json, load_features, street_segments, write_text
from geoscale.core.exceptions import GeoScaleError
from geoscale.io.geojson import dump_collection
from geoscale.io.tables import series_csv
from geoscale.models.series import ValueSeries
from geoscale.models.street import PlanarArrangement
from geoscale.services.arrangement import build_arrangement
from geoscale.services.scaling_stats import ht_index
from geoscale.services.street_topology import (
    STRATEGIES,
    area_series,
    blocks_geojson,
    border_numbers,
    check_partition,
    cities_geojson,
    city_center,
    connectivity_graph,
    degree_series,
    extract_blocks,
    natural_cities,
    streets_geojson,
    topological_center,
    trace_natural_streets,
    with_border_numbers,
    with_hotspots,
)

logger = logging.getLogger("geoscale.cli")


def _arrangement(path: str) -> PlanarArrangement:
    return build_arrangement(street_segments(load_features(path)))


def _series_ht_index(build: Callable[[], ValueSeries]) -> Optional[int]:
    """ht-index of a derived series, or None when the series cannot be formed"""
    try:
        return ht_index(build())
    except GeoScaleError as e:
        logger.info(f"No ht-index: {e}")
        return None


@click.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--strategy", type=click.Choice(STRATEGIES), help="Join strategy [every-best-fit]")
@click.option("--angle", "angle_threshold", type=float, help="Largest deflection joined, in degrees [45]")
@click.option("--graph", "graph_path", type=click.Path(dir_okay=False), help="Write the connectivity graph as JSON")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), help="Write natural streets as GeoJSON")
@click.option("--degrees", "degrees_path", type=click.Path(dir_okay=False), help="Write street degrees as CSV")
@click.option("--json", "as_json", is_flag=True)
def streets(path, strategy, angle_threshold, graph_path, out_path, degrees_path, as_json):
    """Natural streets and their connectivity graph"""
    config = command_config("streets", inputs=[path], strategy=strategy, angle_threshold=angle_threshold)
    arrangement = _arrangement(path)
    natural = trace_natural_streets(arrangement, config.strategy, config.angle_threshold)
    check_partition(natural, arrangement)
    graph = connectivity_graph(natural, arrangement)

    if graph_path:
        write_text(graph_path, json.dumps(graph.to_json_dict(), indent=1))
    if out_path:
        write_text(out_path, dump_collection(streets_geojson(natural, arrangement, graph)))
    if degrees_path:
        write_text(degrees_path, series_csv(degree_series(graph)))

    index = _series_ht_index(lambda: degree_series(graph))
    if as_json:
        echo_json({
            "segments": len(arrangement.edges),
            "streets": [s.model_dump() for s in natural],
            "graph": graph.to_json_dict(),
            "degree_ht_index": index,
        })
        return
    click.echo(f"{len(arrangement.edges)} segments -> {len(natural)} natural streets ({config.strategy})")
    click.echo(f"connectivity graph: {graph.node_count} nodes, {graph.link_count} links")
    if index is not None:
        click.echo(f"degree ht-index {index}")


@click.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--border-numbers", "with_border", is_flag=True, help="Number blocks by distance from the border")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), help="Write blocks as GeoJSON")
@click.option("--areas", "areas_path", type=click.Path(dir_okay=False), help="Write block areas as CSV")
@click.option("--json", "as_json", is_flag=True)
def blocks(path, with_border, out_path, areas_path, as_json):
    """Street blocks: the minimum rings of the street network"""
    found = extract_blocks(_arrangement(path))
    center = set()
    if with_border and found:
        border = border_numbers(found)
        found = with_border_numbers(found, border)
        center = topological_center(found, border)

    if out_path:
        write_text(out_path, dump_collection(blocks_geojson(found)))
    if areas_path:
        write_text(areas_path, series_csv(area_series(found)))

    index = _series_ht_index(lambda: area_series(found))
    if as_json:
        echo_json({
            "blocks": [b.model_dump(exclude={"ring"}) for b in found],
            "center": sorted(center),
            "area_ht_index": index,
        })
        return
    click.echo(f"{len(found)} blocks")
    if with_border and found:
        top = max(b.border_number for b in found)
        for level in range(1, top + 1):
            click.echo(f"border number {level}: {sum(1 for b in found if b.border_number == level)} blocks")
        click.echo(f"topological center: {sorted(center)}")
    if index is not None:
        click.echo(f"area ht-index {index}")


@click.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--hotspots", "with_hotspots_flag", is_flag=True, help="Recurse inside each city")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), help="Write city outlines as GeoJSON")
@click.option("--json", "as_json", is_flag=True)
def cities(path, with_hotspots_flag, out_path, as_json):
    """Natural cities: connected patches of below-mean blocks"""
    found = extract_blocks(_arrangement(path))
    result = natural_cities(found)
    if with_hotspots_flag:
        result = with_hotspots(result, found)
    centers = {c.id: sorted(city_center(c, found)) for c in result}

    if out_path:
        write_text(out_path, dump_collection(cities_geojson(result, found)))
    if as_json:
        echo_json({
            "blocks": len(found),
            "cities": [{**c.model_dump(), "center": centers[c.id]} for c in result],
        })
        return
    click.echo(f"{len(found)} blocks -> {len(result)} natural cities")
    for city in result:
        line = f"city {city.id}: {len(city.block_ids)} blocks, area {city.area:.6g}, center {centers[city.id]}"
        if city.hotspots:
            line += f", hotspot levels {[len(level) for level in city.hotspots]}"
        click.echo(line)
