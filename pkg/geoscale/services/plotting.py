# geoscale/services/plotting.py
"""
SVG plots through matplotlib.

Output is byte-stable: fixed canvas, fixed hash salt, no date metadata and
text kept as SVG text elements.
"""
import io
import logging
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import matplotlib

matplotlib.use("Agg")

from matplotlib import rc_context  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402

from geoscale.core.config import settings  # noqa: E402
from geoscale.core.exceptions import InputError  # noqa: E402
from geoscale.models.cli import PlotSpec  # noqa: E402
from geoscale.models.fractal import LogLogFit  # noqa: E402
from geoscale.models.series import RankSizeRow  # noqa: E402
from geoscale.models.terrain import SlopeHistogram  # noqa: E402

logger = logging.getLogger("geoscale.plotting")

DPI = 100

SVG_STYLE = {
    "svg.hashsalt": "geoscale",
    "svg.fonttype": "none",
    "font.family": "DejaVu Sans",
    "font.size": 11,
    "axes.linewidth": 1.0,
    "lines.linewidth": 1.5,
    "lines.markersize": 5,
    "path.simplify": False,
}


def _check_log_data(spec: PlotSpec) -> None:
    for x, y in [*spec.points, *(spec.fitted or [])]:
        if x <= 0 or y <= 0:
            raise InputError(f"{spec.kind} plot uses log axes; got non-positive point ({x}, {y})")


def render_svg(spec: PlotSpec) -> str:
    """SVG markup for the plot"""
    if spec.log_axes:
        _check_log_data(spec)

    with rc_context(SVG_STYLE):
        fig = Figure(figsize=(settings.PLOT_WIDTH / DPI, settings.PLOT_HEIGHT / DPI), dpi=DPI)
        ax = fig.add_subplot()
        xs = [x for x, _ in spec.points]
        ys = [y for _, y in spec.points]

        if spec.kind == "slope-histogram":
            ax.bar(xs, ys, width=spec.bar_width or 1.0, align="edge", color="#4c72b0", edgecolor="black")
        elif spec.kind == "curve":
            ax.plot(xs, ys, color="black")
            ax.set_aspect("equal")
        else:
            ax.plot(xs, ys, "o", color="#4c72b0")
            ax.set_xscale("log")
            ax.set_yscale("log")
        if spec.fitted:
            ax.plot([x for x, _ in spec.fitted], [y for _, y in spec.fitted], "-", color="#c44e52")

        ax.set_xlabel(spec.x_label)
        ax.set_ylabel(spec.y_label)
        if spec.title:
            ax.set_title(spec.title)
        for i, text in enumerate(spec.annotations):
            ax.text(0.03, 0.95 - 0.06 * i, text, transform=ax.transAxes, va="top")

        buffer = io.StringIO()
        fig.savefig(buffer, format="svg", metadata={"Date": None})
    return buffer.getvalue()


def emit_plot(spec: PlotSpec, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(render_svg(spec), encoding="utf-8")
    logger.info(f"Wrote {spec.kind} plot to {path}")
    return path


def _fit_line(fit: Optional[LogLogFit], xs: Sequence[float]) -> Optional[List[Tuple[float, float]]]:
    if fit is None:
        return None
    lo, hi = min(xs), max(xs)
    return [(lo, fit.predict(lo)), (hi, fit.predict(hi))]


def richardson_spec(points: Sequence[Tuple[float, float]], fit: Optional[LogLogFit] = None,
                    y_label: str = "measured length") -> PlotSpec:
    annotations = []
    if fit is not None and fit.dimension is not None:
        annotations.append(f"D = {fit.dimension:.4f}  (r² = {fit.r_squared:.4f})")
    return PlotSpec(
        kind="richardson",
        points=list(points),
        fitted=_fit_line(fit, [x for x, _ in points]),
        x_label="measuring scale",
        y_label=y_label,
        annotations=annotations,
    )


def rank_size_spec(rows: Sequence[RankSizeRow], ht_index: Optional[int] = None) -> PlotSpec:
    return PlotSpec(
        kind="rank-size",
        points=[(float(r.rank), r.value) for r in rows],
        x_label="rank",
        y_label="size",
        annotations=[f"ht-index = {ht_index}"] if ht_index is not None else [],
    )


def histogram_spec(h: SlopeHistogram, title: str = "") -> PlotSpec:
    return PlotSpec(
        kind="slope-histogram",
        points=list(h.bins) or [(0.0, 0.0)],
        x_label="slope class (degrees)",
        y_label="area",
        title=title,
        bar_width=h.bin_width,
    )


def curve_spec(vertices, title: str = "") -> PlotSpec:
    return PlotSpec(kind="curve", points=[(float(x), float(y)) for x, y in vertices], title=title)
