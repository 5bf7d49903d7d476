# seed_demo_data.py
import math
import os
import sys
from pathlib import Path

import numpy as np

# Add the project root to the Python path so we can import geoscale modules
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

# Import the settings from the package
from geoscale import datasets
from geoscale.core.config import settings
from geoscale.io.ascii_grid import write_ascii_grid
from geoscale.io.geojson import serialize_geojson
from geoscale.io.tables import series_csv
from geoscale.models.fractal import KochSpec
from geoscale.models.geometry import GeoFeature, Polygon
from geoscale.services.fractal_measure import koch_curve, koch_recursive_segments
from geoscale.services.scaling_stats import zipf_series
from geoscale.services.terrain import synthetic_fractal_surface


def count_grid_csv(grid) -> str:
    lines = ["col,row,numerator,denominator"]
    for (c, r), cell in sorted(grid.cells.items()):
        lines.append(f"{c},{r},{cell.numerator},{cell.denominator}")
    return "\n".join(lines) + "\n"


def zoning_csv(zoning) -> str:
    lines = ["col,row,zone_id"]
    for (c, r), zone in sorted(zoning.assignment.items()):
        lines.append(f"{c},{r},{zone}")
    return "\n".join(lines) + "\n"


def segments_geojson(segments) -> str:
    return serialize_geojson(
        GeoFeature(geometry=s.geometry, properties={"name": s.name} if s.name else {}) for s in segments
    )


def regular_polygon(n: int, radius: float, center=(0.0, 0.0)) -> Polygon:
    angles = np.linspace(0.0, 2 * math.pi, n, endpoint=False)
    return Polygon(exterior=np.column_stack([center[0] + radius * np.cos(angles),
                                             center[1] + radius * np.sin(angles)]))


# Define demo files: name -> text builder
files = {
    "koch.geojson": lambda: serialize_geojson([GeoFeature(geometry=koch_curve(KochSpec(iterations=6)))]),
    "circle.geojson": lambda: serialize_geojson([GeoFeature(geometry=regular_polygon(20, 3.0, (5.0, 4.0)))]),
    "koch_segments.csv": lambda: series_csv(koch_recursive_segments(KochSpec(iterations=3))),
    "zipf.csv": lambda: series_csv(zipf_series(1000)),
    "surface.asc": lambda: write_ascii_grid(synthetic_fractal_surface(7, 0.5, settings.SEED)),
    "grid.geojson": lambda: segments_geojson(datasets.block_grid(6, 6)),
    "strip.geojson": lambda: segments_geojson(datasets.block_strip([1, 1, 2, 10, 1, 1, 10, 12])),
    "counts.csv": lambda: count_grid_csv(datasets.scale_grid()),
    "zoning_counts.csv": lambda: count_grid_csv(datasets.zoning_grid()),
}

for zoning in datasets.nested_zonings(datasets.scale_grid()):
    files[f"{zoning.name}.csv"] = (lambda z: lambda: zoning_csv(z))(zoning)
for zoning in datasets.alternative_zonings(datasets.zoning_grid()):
    files[f"by_{zoning.name}.csv"] = (lambda z: lambda: zoning_csv(z))(zoning)


def seed_demo(target: Path):
    target.mkdir(parents=True, exist_ok=True)
    print(f"\nWriting demo data to {target}:")
    written = 0
    for name, build in files.items():
        try:
            (target / name).write_text(build(), encoding="utf-8")
            print(f"✅ Wrote: {name}")
            written += 1
        except Exception as e:
            print(f"❌ Error writing {name}: {e}")

    print(f"\n{written} of {len(files)} files written.")
    print("\nTry:")
    print(f"  python -m geoscale dimension {target / 'koch.geojson'} --scales 0.33,0.11,0.037,0.012")
    print(f"  python -m geoscale maup {target / 'counts.csv'} --nested "
          f"--zones {','.join(str(target / f'{z.name}.csv') for z in datasets.nested_zonings(datasets.scale_grid()))}")
    print(f"  python -m geoscale slope {target / 'surface.asc'}")


if __name__ == "__main__":
    seed_demo(Path(sys.argv[1] if len(sys.argv) > 1 else "demo"))
