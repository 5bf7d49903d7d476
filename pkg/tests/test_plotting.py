import pytest
from pydantic import ValidationError

from geoscale.core.exceptions import InputError
from geoscale.models.cli import PlotSpec
from geoscale.models.fractal import KochSpec
from geoscale.models.terrain import SlopeHistogram
from geoscale.services.fractal_measure import koch_curve, loglog_fit
from geoscale.services.plotting import (
    curve_spec,
    emit_plot,
    histogram_spec,
    rank_size_spec,
    render_svg,
    richardson_spec,
)
from geoscale.services.scaling_stats import rank_size_table, zipf_series

POINTS = [(1.0, 10.0), (0.5, 13.0), (0.25, 17.0)]


def test_svg_is_byte_stable():
    spec = richardson_spec(POINTS, loglog_fit(POINTS))
    first = render_svg(spec)
    assert first.startswith("<?xml")
    assert "<svg" in first
    assert render_svg(spec) == first


def test_svg_keeps_text():
    svg = render_svg(rank_size_spec(rank_size_table(zipf_series(20)), ht_index=3))
    assert "ht-index = 3" in svg
    assert "rank" in svg


def test_richardson_spec_annotates_dimension():
    fit = loglog_fit(POINTS).model_copy(update={"dimension": 1.2})
    spec = richardson_spec(POINTS, fit)
    assert spec.log_axes
    assert spec.fitted[0][0] == 0.25
    assert spec.fitted[-1][0] == 1.0
    assert spec.annotations[0].startswith("D = ")


def test_log_plot_rejects_non_positive():
    with pytest.raises(InputError, match="non-positive"):
        render_svg(PlotSpec(kind="rank-size", points=[(1.0, 2.0), (2.0, 0.0)]))


def test_linear_plots_accept_zero():
    h = SlopeHistogram(bin_width=1.0, bins=[(0.0, 16.0)])
    assert "<svg" in render_svg(histogram_spec(h, "flat"))
    assert "<svg" in render_svg(curve_spec(koch_curve(KochSpec(iterations=2)).vertices))


def test_spec_needs_points():
    with pytest.raises(ValidationError):
        PlotSpec(kind="curve", points=[])


def test_emit_plot(tmp_path):
    path = emit_plot(richardson_spec(POINTS), tmp_path / "plot.svg")
    assert path.read_text(encoding="utf-8") == render_svg(richardson_spec(POINTS))
