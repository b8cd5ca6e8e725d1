"""Surface areas and volumes of unit spheres and balls in low dimension."""

import math

from .errors import DimensionUnsupported

_SUPPORTED = (1, 2, 3)


def check_dimension(dimension: int) -> int:
    if dimension not in _SUPPORTED:
        raise DimensionUnsupported(
            f"dimension must be 1, 2 or 3, got {dimension!r}")
    return int(dimension)


def unit_sphere_area(dimension: int) -> float:
    """Surface measure of the unit sphere boundary in R^dimension.

    Equals 2 in dimension 1 (two endpoints), 2*pi in dimension 2 and
    4*pi in dimension 3.
    """
    check_dimension(dimension)
    return 2.0 * math.pi ** (dimension / 2.0) / math.gamma(dimension / 2.0)


def unit_ball_volume(dimension: int) -> float:
    """Lebesgue volume of the unit ball in R^dimension."""
    check_dimension(dimension)
    return math.pi ** (dimension / 2.0) / math.gamma(dimension / 2.0 + 1.0)
