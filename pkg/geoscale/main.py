# geoscale/main.py
import logging
import sys
from typing import List, Optional

import click
from pydantic import ValidationError

from geoscale.cli.app import register_commands
from geoscale.core.config import apply_settings, load_settings, settings
from geoscale.core.exceptions import GeoScaleError, InputError
from geoscale.core.logging import configure_logging

logger = logging.getLogger("geoscale.main")


class GeoScaleGroup(click.Group):
    """Translates library errors into an `error: ...` line and the mapped exit code"""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except GeoScaleError as e:
            click.echo(f"error: {e}", err=True)
            raise click.exceptions.Exit(e.exit_code)
        except ValidationError as e:
            error = e.errors()[0]
            where = ".".join(str(part) for part in error["loc"])
            click.echo(f"error: invalid {e.title} {where}: {error['msg']}", err=True)
            raise click.exceptions.Exit(InputError.exit_code)


@click.group(cls=GeoScaleGroup)
@click.option("--config", "config_path", type=click.Path(dir_okay=False),
              help="KEY=value file overriding defaults and environment")
@click.option("--log-level", help="DEBUG, INFO, WARNING or ERROR [WARNING]")
def cli(config_path, log_level):
    """Scale-dependent geographic measurement: fractal lengths and dimensions,
    head/tail breaks, slope across resolutions, areal aggregation effects and
    street network topology."""
    if config_path:
        apply_settings(load_settings(config_path))
    configure_logging(log_level or settings.LOG_LEVEL)
    logger.debug(f"Settings: {settings.model_dump()}")


register_commands(cli)


def run(argv: Optional[List[str]] = None) -> int:
    """Run one command line and return its exit code"""
    try:
        result = cli.main(args=argv, prog_name="geoscale", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return 1
    return result if isinstance(result, int) else 0


if __name__ == "__main__":
    sys.exit(run())
