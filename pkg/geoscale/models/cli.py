# geoscale/models/cli.py
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from geoscale.core.config import Settings

SUBCOMMANDS = (
    "koch", "length", "dimension", "area", "htb", "htindex",
    "slope", "maup", "streets", "blocks", "cities",
)

PlotKind = Literal["richardson", "rank-size", "slope-histogram", "curve"]


class CommandConfig(BaseModel):
    """
    Resolved parameters of one command run.

    Values given on the command line win; anything left as None falls back to
    the settings (defaults, environment, --config file).
    """

    model_config = ConfigDict(frozen=True)

    subcommand: str
    inputs: List[Path] = []
    head_limit: float = Field(gt=0, lt=1)
    angle_threshold: float = Field(gt=0, lt=90)
    strategy: str
    coarsen_factors: List[int]
    hist_width: float = Field(gt=0)
    seed: int
    outputs: Dict[str, Path] = {}

    @classmethod
    def resolve(cls, subcommand: str, settings: Settings, inputs=(), outputs=None, **flags) -> "CommandConfig":
        defaults = {
            "head_limit": settings.HEAD_LIMIT,
            "angle_threshold": settings.ANGLE_THRESHOLD,
            "strategy": settings.STRATEGY,
            "coarsen_factors": settings.coarsen_factors,
            "hist_width": settings.HIST_WIDTH,
            "seed": settings.SEED,
        }
        values = {key: flags[key] if flags.get(key) is not None else value for key, value in defaults.items()}
        given = {k: Path(v) for k, v in (outputs or {}).items() if v is not None}
        return cls(subcommand=subcommand, inputs=[Path(p) for p in inputs], outputs=given, **values)


class PlotSpec(BaseModel):
    """
    What to draw. richardson and rank-size use log axes; slope-histogram
    draws bars; curve draws a polyline on equal linear axes.
    """

    model_config = ConfigDict(frozen=True)

    kind: PlotKind
    points: List[Tuple[float, float]] = Field(min_length=1)
    fitted: Optional[List[Tuple[float, float]]] = None
    x_label: str = ""
    y_label: str = ""
    title: str = ""
    annotations: List[str] = []
    bar_width: Optional[float] = None

    @property
    def log_axes(self) -> bool:
        return self.kind in ("richardson", "rank-size")
