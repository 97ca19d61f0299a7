"""
精确几何模块
"""

from .exactgeom import (
    Box,
    Cube,
    Interval,
    aspect,
    ball_in_cube,
    format_scalar,
    parse_point,
    parse_scalar,
    project,
)
from .whitney import WhitneyCube, WhitneySegment, whitney_cubes, whitney_interval

__all__ = [
    'Box', 'Cube', 'Interval', 'aspect', 'ball_in_cube', 'format_scalar',
    'parse_point', 'parse_scalar', 'project',
    'WhitneyCube', 'WhitneySegment', 'whitney_cubes', 'whitney_interval',
]
