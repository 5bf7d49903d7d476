# geoscale/cli/commands/terrain.py
import click

from geoscale.cli.dependencies import command_config, echo_json, parse_ints, read_text, write_text
from geoscale.core.exceptions import InputError
from geoscale.io.ascii_grid import parse_ascii_grid, write_ascii_grid
from geoscale.io.tables import pairs_csv
from geoscale.services.plotting import emit_plot, histogram_spec
from geoscale.services.terrain import (
    coarsen,
    resolution_ladder,
    slope_grid,
    synthetic_fractal_surface,
)


@click.command()
@click.argument("path", required=False, type=click.Path(exists=True, dir_okay=False))
@click.option("--coarsen", "factors", help="Comma-separated coarsening factors [2,4,8]")
@click.option("--hist-width", type=float, help="Slope class width in degrees [1.0]")
@click.option("--synthetic", type=int, help="Use a diamond-square surface of 2^K+1 cells instead of a DEM")
@click.option("--roughness", type=float, default=0.5, show_default=True, help="Roughness of the synthetic surface")
@click.option("--seed", type=int, help="Seed of the synthetic surface [0]")
@click.option("--out-prefix", help="Write P_<factor>.asc slope grids, P_<factor>.csv and P_<factor>.svg histograms")
@click.option("--json", "as_json", is_flag=True)
def slope(path, factors, hist_width, synthetic, roughness, seed, out_prefix, as_json):
    """Slope ranges and slope-class histograms across coarsened resolutions"""
    if (path is None) == (synthetic is None):
        raise InputError("give either a DEM file or --synthetic K")
    config = command_config(
        "slope",
        inputs=[path] if path else [],
        coarsen_factors=parse_ints(factors, "--coarsen") if factors else None,
        hist_width=hist_width,
        seed=seed,
    )
    if path:
        dem = parse_ascii_grid(read_text(path))
    else:
        dem = synthetic_fractal_surface(synthetic, roughness, config.seed)

    levels = resolution_ladder(dem, config.coarsen_factors, config.hist_width)

    if out_prefix:
        for level in levels:
            grid = dem if level.factor == 1 else coarsen(dem, level.factor)
            stem = f"{out_prefix}_{level.factor}"
            write_text(f"{stem}.asc", write_ascii_grid(slope_grid(grid).grid))
            write_text(f"{stem}.csv", pairs_csv(level.histogram.bins, ["slope_class", "area"]))
            emit_plot(histogram_spec(level.histogram, title=f"Slope classes, cell size {level.cell_size:g}"),
                      f"{stem}.svg")

    if as_json:
        echo_json({"levels": [level.model_dump() for level in levels]})
        return
    click.echo(f"{'factor':>6} {'cell':>10} {'min':>9} {'max':>9} {'width':>9}")
    for level in levels:
        click.echo(
            f"{level.factor:>6} {level.cell_size:>10.4g} {level.min_slope:>9.3f} "
            f"{level.max_slope:>9.3f} {level.width:>9.3f}"
        )
