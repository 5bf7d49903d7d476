# geoscale/cli/commands/classify.py
import click

from geoscale.cli.dependencies import command_config, echo_json, read_text, write_text
from geoscale.io.tables import read_value_series
from geoscale.services.plotting import emit_plot, rank_size_spec
from geoscale.services.scaling_stats import SCALING_HT_INDEX, head_tail_breaks, partition_json, rank_size_table


@click.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--head-limit", type=float, help="Largest head share that continues the recursion [0.4]")
@click.option("--plot", "plot_path", type=click.Path(dir_okay=False), help="Rank-size plot (SVG)")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), help="Write the partition as JSON")
@click.option("--json", "as_json", is_flag=True)
def htb(path, head_limit, plot_path, out_path, as_json):
    """Head/tail breaks of a series of positive values"""
    config = command_config("htb", inputs=[path], head_limit=head_limit)
    series = read_value_series(read_text(path), label=path)
    partition = head_tail_breaks(series, config.head_limit)

    if out_path:
        write_text(out_path, partition_json(partition))
    if plot_path:
        emit_plot(rank_size_spec(rank_size_table(series), partition.ht_index), plot_path)
    if as_json:
        echo_json(partition.to_json_dict())
        return

    click.echo(f"{'level':>5} {'mean':>16} {'head':>8} {'tail':>8} {'head%':>7}")
    for i, level in enumerate(partition.levels, start=1):
        marker = "" if level.accepted else "  (stop)"
        click.echo(
            f"{i:>5} {level.mean:>16.6g} {level.head_count:>8} {level.tail_count:>8} "
            f"{100 * level.head_fraction:>6.1f}%{marker}"
        )
    click.echo(f"ht-index {partition.ht_index}")


@click.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--head-limit", type=float, help="Largest head share that continues the recursion [0.4]")
@click.option("--json", "as_json", is_flag=True)
def htindex(path, head_limit, as_json):
    """ht-index of a series of positive values"""
    config = command_config("htindex", inputs=[path], head_limit=head_limit)
    partition = head_tail_breaks(read_value_series(read_text(path), label=path), config.head_limit)
    if as_json:
        echo_json({
            "ht_index": partition.ht_index,
            "head_sizes": partition.head_sizes,
            "scaling": partition.ht_index >= SCALING_HT_INDEX,
        })
        return
    click.echo(str(partition.ht_index))
