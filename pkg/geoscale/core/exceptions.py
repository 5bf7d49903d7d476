# geoscale/core/exceptions.py


class GeoScaleError(Exception):
    """Base error; exit_code is what the command line returns for it"""

    exit_code = 1


class InputError(GeoScaleError, ValueError):
    """Unparseable input, unsupported geometry or an out-of-range parameter"""

    exit_code = 2


class GeometryError(InputError):
    """Geometry that violates a type invariant (degenerate ring, self-intersection)"""


class NumericalError(GeoScaleError, ArithmeticError):
    """A computation that cannot produce a result from otherwise valid input"""

    exit_code = 3


class ResourceError(GeoScaleError):
    """Request that would exceed a resource guard"""

    exit_code = 3


class TopologyError(NumericalError):
    """Planar arrangement or street partition is inconsistent"""
