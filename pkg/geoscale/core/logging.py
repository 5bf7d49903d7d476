# geoscale/core/logging.py
import logging

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def configure_logging(level: str = "WARNING") -> None:
    """Configure root logging once for command-line use"""
    numeric = logging.getLevelName(level.upper())
    if not isinstance(numeric, int):
        numeric = logging.WARNING
    logging.basicConfig(level=numeric, format=LOG_FORMAT)
    logging.getLogger("geoscale").setLevel(numeric)
    # matplotlib's font manager is chatty at INFO
    logging.getLogger("matplotlib").setLevel(max(numeric, logging.WARNING))
