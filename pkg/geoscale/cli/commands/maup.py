# geoscale/cli/commands/maup.py
from pathlib import Path

import click

from geoscale.cli.dependencies import echo_json, read_text
from geoscale.core.exceptions import InputError
from geoscale.datasets import demo_report
from geoscale.io.tables import read_count_grid, read_zoning
from geoscale.services.maup import (
    aggregate_rates,
    format_rate,
    global_rate,
    scale_effect_table,
    zoning_effect_spread,
)


@click.command()
@click.argument("source")
@click.option("--zones", help="Comma-separated zoning CSV files (col,row,zone_id)")
@click.option("--nested", is_flag=True, help="Zonings are nested fine to coarse: report the scale effect")
@click.option("--json", "as_json", is_flag=True)
def maup(source, zones, nested, as_json):
    """Scale and zoning effects of aggregating a count grid

    SOURCE is a count grid CSV (col,row,numerator,denominator), or "demo" for
    the bundled example grids. A single zoning lists its per-zone rates.
    """
    if source == "demo":
        click.echo(demo_report(), nl=False)
        return
    if not Path(source).is_file():
        raise InputError(f"count grid not found: {source}")
    if not zones:
        raise InputError("--zones is required with a count grid")

    grid = read_count_grid(read_text(source))
    zonings = [read_zoning(read_text(p), Path(p).stem) for p in zones.split(",") if p.strip()]

    if len(zonings) == 1 and not nested:
        zoning = zonings[0]
        rates = aggregate_rates(grid, zoning)
        if as_json:
            echo_json({
                "global_rate": global_rate(grid),
                "zoning": zoning.name,
                "zones": [rate.model_dump() for rate in rates.values()],
            })
            return
        click.echo(f"{'zone':<12} {'num':>7} {'den':>7} {'rate':>5}")
        for rate in rates.values():
            click.echo(f"{rate.zone:<12} {rate.numerator:>7} {rate.denominator:>7} {format_rate(rate.rate):>5}")
    elif nested:
        rows = scale_effect_table(grid, zonings)
        if as_json:
            echo_json({"global_rate": global_rate(grid), "rows": [row.model_dump() for row in rows]})
            return
        click.echo(f"{'zoning':<12} {'zones':>5} {'min':>5} {'max':>5}")
        for row in rows:
            click.echo(
                f"{row.zoning:<12} {row.zone_count:>5} {format_rate(row.min_rate):>5} "
                f"{format_rate(row.max_rate):>5}"
            )
    else:
        report = zoning_effect_spread(grid, zonings)
        if as_json:
            echo_json({"global_rate": global_rate(grid), **report.model_dump()})
            return
        click.echo(f"{'zoning':<12} {'min':>5} {'max':>5} {'mean':>5}")
        for name in report.rate_vectors:
            click.echo(
                f"{name:<12} {format_rate(report.statistics['min'][name]):>5} "
                f"{format_rate(report.statistics['max'][name]):>5} "
                f"{format_rate(report.statistics['mean'][name]):>5}"
            )
    click.echo(f"whole-grid rate {format_rate(global_rate(grid))}")
