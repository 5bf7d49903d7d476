# geoscale/cli/commands/fractal.py
import click

from geoscale.cli.dependencies import (
    echo_json,
    first_polygon,
    first_polyline,
    load_features,
    parse_anchor,
    parse_scales,
    write_text,
)
from geoscale.core.exceptions import InputError
from geoscale.io.tables import pairs_csv
from geoscale.models.fractal import KochSpec
from geoscale.services.fractal_measure import (
    MIN_FIT_SCALES,
    area_dimension,
    box_count,
    boxcount_dimension,
    divider_fit,
    koch_curve,
    rasterized_area,
    richardson_table,
)
from geoscale.services.geometry import polygon_area, polyline_length
from geoscale.services.plotting import curve_spec, emit_plot, richardson_spec


@click.command()
@click.option("--iterations", "-n", type=int, required=True, help="Koch iterations (0-12)")
@click.option("--unit", type=float, default=1.0, show_default=True, help="Initiator length")
@click.option("--svg", "svg_path", type=click.Path(dir_okay=False), help="Draw the curve to an SVG file")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output")
def koch(iterations, unit, svg_path, as_json):
    """Build a Koch curve and report its size"""
    if iterations < 0:
        raise InputError(f"--iterations must be >= 0, got {iterations}")
    spec = KochSpec(iterations=iterations, unit=unit)
    curve = koch_curve(spec)
    length = polyline_length(curve)

    if svg_path:
        emit_plot(curve_spec(curve.vertices, title=f"Koch curve, iteration {iterations}"), svg_path)
    if as_json:
        echo_json({
            "iterations": iterations,
            "unit": unit,
            "segment_count": spec.segment_count,
            "vertex_count": len(curve),
            "length": length,
            "vertices": curve.vertices.tolist(),
        })
        return
    click.echo(f"iteration {iterations}: {spec.segment_count} segments, {len(curve)} vertices, length {length!r}")


@click.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--yardsticks", required=True, help="Comma-separated yardstick lengths")
@click.option("--plot", "plot_path", type=click.Path(dir_okay=False), help="Richardson plot (SVG)")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), help="Write yardstick,length pairs")
@click.option("--json", "as_json", is_flag=True)
def length(path, yardsticks, plot_path, csv_path, as_json):
    """Measure a curve with a series of yardsticks"""
    curve = first_polyline(load_features(path))
    walks = richardson_table(curve, parse_scales(yardsticks, "--yardsticks"))
    points = [(w.yardstick, w.measured_length) for w in walks]
    fit = divider_fit(walks) if len(walks) >= MIN_FIT_SCALES else None

    write_text(csv_path, pairs_csv(points, ["yardstick", "length"]))
    if plot_path:
        emit_plot(richardson_spec(points, fit), plot_path)
    if as_json:
        echo_json({
            "polyline_length": polyline_length(curve),
            "walks": [w.model_dump() for w in walks],
            "fit": fit.model_dump() if fit else None,
        })
        return
    click.echo(f"{'yardstick':>14} {'steps':>8} {'length':>14}")
    for w in walks:
        click.echo(f"{w.yardstick:>14.6g} {w.steps:>8} {w.measured_length:>14.6f}")
    if fit:
        click.echo(f"D = {fit.dimension:.4f} (r2 = {fit.r_squared:.4f})")


@click.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--method", type=click.Choice(["divider", "boxcount"]), default="divider", show_default=True)
@click.option("--scales", required=True, help="Comma-separated yardsticks or box sizes")
@click.option("--anchor", help="Box grid offset dx,dy from the bounding-box corner")
@click.option("--plot", "plot_path", type=click.Path(dir_okay=False))
@click.option("--json", "as_json", is_flag=True)
def dimension(path, method, scales, anchor, plot_path, as_json):
    """Fractal dimension by the divider or box-counting method"""
    features = load_features(path)
    series = parse_scales(scales, "--scales")
    if method == "divider":
        curve = first_polyline(features)
        walks = richardson_table(curve, series)
        fit = divider_fit(walks)
        points = [(w.yardstick, w.measured_length) for w in walks]
        y_label = "measured length"
    else:
        geometry = features[0].geometry if features else None
        if geometry is None:
            raise InputError("input holds no geometry")
        counts = box_count(geometry, series, parse_anchor(anchor))
        fit = boxcount_dimension(counts)
        points = [(size, float(n)) for size, n in counts]
        y_label = "occupied boxes"

    if plot_path:
        emit_plot(richardson_spec(points, fit, y_label=y_label), plot_path)
    if as_json:
        echo_json({"method": method, "points": points, "fit": fit.model_dump()})
        return
    for x, y in points:
        click.echo(f"{x:>14.6g} {y:>14.6f}")
    click.echo(f"D = {fit.dimension:.4f} (slope {fit.slope:.4f}, r2 = {fit.r_squared:.4f}, {method})")


@click.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--cells", required=True, help="Comma-separated cell sizes")
@click.option("--anchor", help="Lattice anchor point x,y")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), help="Write cell,area pairs")
@click.option("--json", "as_json", is_flag=True)
def area(path, cells, anchor, csv_path, as_json):
    """Area of a polygon measured by raster cells of decreasing size"""
    poly = first_polygon(load_features(path))
    areas = rasterized_area(poly, parse_scales(cells, "--cells"), parse_anchor(anchor))
    true_area = polygon_area(poly)
    fit = area_dimension(areas) if len(areas) >= 3 else None

    write_text(csv_path, pairs_csv(areas, ["cell_size", "area"]))
    if as_json:
        echo_json({
            "polygon_area": true_area,
            "areas": areas,
            "fit": fit.model_dump() if fit else None,
        })
        return
    click.echo(f"{'cell':>14} {'area':>16} {'excess':>9}")
    for cell, value in areas:
        click.echo(f"{cell:>14.6g} {value:>16.6f} {100 * (value / true_area - 1):>8.2f}%")
    click.echo(f"polygon area {true_area!r}")
