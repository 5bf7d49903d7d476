# geoscale/services/maup.py
"""
Scale and zoning effects of the modifiable areal unit problem.

Rates are percentages; zones with a zero denominator get an undefined rate
(None) instead of 0%.
"""
import logging
from typing import Dict, List, Optional, Sequence

from geoscale.core.exceptions import InputError
from geoscale.models.maup import CountGrid, ScaleEffectRow, ZoneRate, Zoning, ZoningEffectReport

logger = logging.getLogger("geoscale.maup")

STATISTICS = ("min", "max", "mean")


def format_rate(rate: Optional[float]) -> str:
    """Display form rounded to a whole percent, e.g. 8.33 -> '8%'"""
    if rate is None:
        return "n/a"
    return f"{round(rate)}%"


def _check_coverage(g: CountGrid, z: Zoning) -> None:
    missing = [cell for cell in g.cells if cell not in z.assignment]
    if missing:
        raise InputError(f"zoning {z.name!r} does not assign cells {sorted(missing)[:5]}")
    extra = [cell for cell in z.assignment if cell not in g.cells]
    if extra:
        raise InputError(f"zoning {z.name!r} assigns cells outside the grid: {sorted(extra)[:5]}")


def aggregate_rates(g: CountGrid, z: Zoning) -> Dict[str, ZoneRate]:
    """Per zone: 100 x sum(numerators) / sum(denominators)"""
    _check_coverage(g, z)
    rates: Dict[str, ZoneRate] = {}
    for zone, cells in sorted(z.members().items()):
        num = sum(g.cells[c].numerator for c in cells)
        den = sum(g.cells[c].denominator for c in cells)
        rates[zone] = ZoneRate(
            zone=zone,
            numerator=num,
            denominator=den,
            rate=100.0 * num / den if den else None,
        )
    return rates


def global_rate(g: CountGrid) -> Optional[float]:
    num = sum(cell.numerator for cell in g.cells.values())
    den = sum(cell.denominator for cell in g.cells.values())
    return 100.0 * num / den if den else None


def _defined(rates: Dict[str, ZoneRate]) -> List[float]:
    return [r.rate for r in rates.values() if r.rate is not None]


def check_nesting(fine: Zoning, coarse: Zoning) -> None:
    """Every fine zone must fall inside exactly one coarse zone"""
    parent: Dict[str, str] = {}
    for cell, zone in sorted(fine.assignment.items()):
        coarse_zone = coarse.assignment.get(cell)
        if zone in parent and parent[zone] != coarse_zone:
            raise InputError(
                f"nesting violation: zone {zone!r} of {fine.name!r} spans zones "
                f"{parent[zone]!r} and {coarse_zone!r} of {coarse.name!r}"
            )
        parent[zone] = coarse_zone


def scale_effect_table(g: CountGrid, nested: Sequence[Zoning]) -> List[ScaleEffectRow]:
    """
    Rate range per aggregation level, zonings ordered fine to coarse.

    The population-weighted mean of every level is the whole-grid rate.
    """
    if not nested:
        raise InputError("scale effect needs at least one zoning")
    for fine, coarse in zip(nested, nested[1:]):
        check_nesting(fine, coarse)

    overall = global_rate(g)
    rows: List[ScaleEffectRow] = []
    for zoning in nested:
        rates = aggregate_rates(g, zoning)
        defined = _defined(rates)
        lo = min(defined) if defined else None
        hi = max(defined) if defined else None
        rows.append(ScaleEffectRow(
            zoning=zoning.name,
            zone_count=len(rates),
            min_rate=lo,
            max_rate=hi,
            spread=hi - lo if defined else None,
            global_rate=overall,
        ))
        logger.debug(f"Scale level {zoning.name}: {len(rates)} zones, range {lo}..{hi}")
    return rows


def _statistic(name: str, values: List[float]) -> Optional[float]:
    if not values:
        return None
    if name == "min":
        return min(values)
    if name == "max":
        return max(values)
    return sum(values) / len(values)


def zoning_effect_spread(g: CountGrid, zonings: Sequence[Zoning]) -> ZoningEffectReport:
    """
    Compare zonings with the same number of zones.

    For each statistic (min, max and unweighted mean zone rate) the report gives
    its value per zoning and its range across zonings.
    """
    if len(zonings) < 2:
        raise InputError("zoning effect needs at least 2 zonings")
    counts = {z.name: len(z.zones) for z in zonings}
    if len(set(counts.values())) != 1:
        raise InputError(f"zone-count mismatch between zonings: {counts}")

    vectors: Dict[str, List[ZoneRate]] = {}
    statistics: Dict[str, Dict[str, Optional[float]]] = {name: {} for name in STATISTICS}
    for zoning in zonings:
        rates = aggregate_rates(g, zoning)
        vectors[zoning.name] = list(rates.values())
        defined = _defined(rates)
        for name in STATISTICS:
            statistics[name][zoning.name] = _statistic(name, defined)

    spread: Dict[str, Optional[float]] = {}
    for name, per_zoning in statistics.items():
        values = [v for v in per_zoning.values() if v is not None]
        spread[name] = max(values) - min(values) if values else None

    return ZoningEffectReport(rate_vectors=vectors, statistics=statistics, spread=spread)


def grid_zoning(g: CountGrid, block_cols: int, block_rows: int, name: str) -> Zoning:
    """Regular zoning of block_cols x block_rows cells per zone"""
    if block_cols < 1 or block_rows < 1:
        raise InputError("zone blocks must be at least 1x1")
    assignment = {
        (c, r): f"{c // block_cols}-{r // block_rows}"
        for c in range(g.ncols) for r in range(g.nrows)
    }
    return Zoning(name=name, assignment=assignment)
