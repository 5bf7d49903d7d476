# geoscale/datasets.py
"""
Bundled demo data: two 4x4 count grids for the areal-unit demo and
synthetic street networks.
"""
from typing import List, Optional, Sequence, Tuple

from geoscale.models.geometry import Polyline
from geoscale.models.maup import CountGrid, Zoning
from geoscale.models.street import StreetSegment
from geoscale.services.maup import (
    aggregate_rates,
    format_rate,
    global_rate,
    grid_zoning,
    scale_effect_table,
    zoning_effect_spread,
)

# Scale-effect grid: cell (0, 0) holds 20 of 200; the top-left 2x2 block 100 of 1200
SCALE_NUMERATORS = [
    [20, 10, 25, 15],
    [30, 40, 35, 20],
    [10, 45, 30, 25],
    [50, 20, 15, 40],
]
SCALE_DENOMINATORS = [
    [200, 100, 250, 300],
    [500, 400, 200, 100],
    [150, 300, 400, 250],
    [400, 200, 100, 350],
]

# Zoning-effect grid: the top-left 2x2 block holds 140 of 1100, column 0 holds 120 of 800
ZONING_NUMERATORS = [
    [20, 10, 15, 30],
    [50, 60, 25, 10],
    [30, 20, 40, 35],
    [20, 15, 10, 45],
]
ZONING_DENOMINATORS = [
    [200, 100, 300, 250],
    [300, 500, 200, 100],
    [100, 400, 250, 300],
    [200, 150, 100, 400],
]


def scale_grid() -> CountGrid:
    return CountGrid.from_rows(SCALE_NUMERATORS, SCALE_DENOMINATORS)


def zoning_grid() -> CountGrid:
    return CountGrid.from_rows(ZONING_NUMERATORS, ZONING_DENOMINATORS)


def nested_zonings(g: CountGrid) -> List[Zoning]:
    """cells -> 2x2 quads -> left/right halves -> whole grid"""
    return [
        grid_zoning(g, 1, 1, "cells"),
        grid_zoning(g, 2, 2, "quads"),
        grid_zoning(g, g.ncols // 2, g.nrows, "halves"),
        grid_zoning(g, g.ncols, g.nrows, "whole"),
    ]


def alternative_zonings(g: CountGrid) -> List[Zoning]:
    """Three ways to cut a 4x4 grid into 4 zones"""
    return [
        grid_zoning(g, 2, 2, "quads"),
        grid_zoning(g, 1, g.nrows, "columns"),
        grid_zoning(g, g.ncols, 1, "rows"),
    ]


def _quoted(label: str, rate) -> str:
    return f"  {label:<34} {format_rate(rate.rate):>5} = {rate.numerator}/{rate.denominator}"


def demo_report() -> str:
    """Human-readable scale and zoning effect tables for the bundled grids"""
    lines: List[str] = []
    a = scale_grid()
    d = zoning_grid()

    lines.append("Scale effect (nested zonings, fine to coarse)")
    lines.append(f"  {'zoning':<8} {'zones':>5} {'min':>5} {'max':>5} {'whole grid':>11}")
    for row in scale_effect_table(a, nested_zonings(a)):
        lines.append(
            f"  {row.zoning:<8} {row.zone_count:>5} {format_rate(row.min_rate):>5} "
            f"{format_rate(row.max_rate):>5} {format_rate(row.global_rate):>11}"
        )

    lines.append("")
    lines.append("Zoning effect (4 zones each)")
    report = zoning_effect_spread(d, alternative_zonings(d))
    lines.append(f"  {'zoning':<8} {'min':>5} {'max':>5} {'mean':>5}")
    for name in report.rate_vectors:
        stats = {key: report.statistics[key][name] for key in ("min", "max", "mean")}
        lines.append(
            f"  {name:<8} {format_rate(stats['min']):>5} {format_rate(stats['max']):>5} "
            f"{format_rate(stats['mean']):>5}"
        )
    lines.append(f"  whole-grid rate {format_rate(global_rate(d))} under every zoning")

    lines.append("")
    lines.append("Quoted groupings")
    lines.append(_quoted("single cell (0,0), scale grid", aggregate_rates(a, nested_zonings(a)[0])["0-0"]))
    lines.append(_quoted("2x2 block (0,0), scale grid", aggregate_rates(a, nested_zonings(a)[1])["0-0"]))
    zonings = alternative_zonings(d)
    lines.append(_quoted("2x2 block (0,0), zoning grid", aggregate_rates(d, zonings[0])["0-0"]))
    lines.append(_quoted("column 0, zoning grid", aggregate_rates(d, zonings[1])["0-0"]))
    return "\n".join(lines) + "\n"


# Street networks


def _segment(sid: str, coords: Sequence[Tuple[float, float]], name: Optional[str] = None) -> StreetSegment:
    return StreetSegment(id=sid, geometry=Polyline(vertices=coords), name=name)


def plus_sign() -> List[StreetSegment]:
    """Two straight segments crossing at the origin"""
    return [
        _segment("h", [(-1.0, 0.0), (1.0, 0.0)]),
        _segment("v", [(0.0, -1.0), (0.0, 1.0)]),
    ]


def block_grid(ncols: int, nrows: int, size: float = 1.0) -> List[StreetSegment]:
    """Full-length horizontal and vertical streets enclosing ncols x nrows square blocks"""
    segments = []
    for r in range(nrows + 1):
        segments.append(_segment(f"row-{r}", [(0.0, r * size), (ncols * size, r * size)], f"Row {r}"))
    for c in range(ncols + 1):
        segments.append(_segment(f"col-{c}", [(c * size, 0.0), (c * size, nrows * size)], f"Col {c}"))
    return segments


def block_strip(widths: Sequence[float], height: float = 1.0) -> List[StreetSegment]:
    """One row of rectangular blocks with the given widths"""
    total = float(sum(widths))
    segments = [
        _segment("south", [(0.0, 0.0), (total, 0.0)]),
        _segment("north", [(0.0, height), (total, height)]),
    ]
    x = 0.0
    for i, w in enumerate([0.0, *widths]):
        x += w
        segments.append(_segment(f"cross-{i}", [(x, 0.0), (x, height)]))
    return segments
