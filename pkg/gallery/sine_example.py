"""
正弦例子: g(x) = x·sin²(1/x), f(x, y) = clamp(y - g(x), 0, 1)

f 的上标度振荡处处有限, 但 g 的图像 (f 的水平集) 长度无穷. 浮点求值.
"""

import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from errors import DimensionError, DomainError, ParameterError
from geometry.exactgeom import Cube, Interval, unit_cube

# 设置日志
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger('sine_example')

# 浮点舍入的余量
ROUNDING_SLACK = 1e-12


@dataclass(frozen=True)
class FloatBracket:
    lo: float
    hi: float
    partial: bool = False

    @property
    def width(self) -> float:
        return self.hi - self.lo


def sine_g(x):
    """x·sin²(1/x), g(0) = 0; 支持 numpy 数组"""
    arr = np.asarray(x, dtype=np.float64)
    safe = np.where(arr > 0, arr, 1.0)
    value = np.where(arr > 0, arr * np.sin(1.0 / safe) ** 2, 0.0)
    return value if value.ndim else float(value)


def sine_g_prime(x):
    """g'(x) = sin²(1/x) - sin(2/x)/x, |g'(x)| ≤ 1 + 1/x"""
    arr = np.asarray(x, dtype=np.float64)
    value = np.sin(1.0 / arr) ** 2 - np.sin(2.0 / arr) / arr
    return value if value.ndim else float(value)


def sine_f(x, y):
    """clamp(y - g(x), 0, 1)"""
    value = np.clip(np.asarray(y, dtype=np.float64) - sine_g(x), 0.0, 1.0)
    return value if np.ndim(value) else float(value)


def _g_cells(lo: float, hi: float, cells: int) -> List[Tuple[float, float]]:
    """[lo, hi] 分成若干小格, 每格上 g 的可信范围 (由斜率界 1 + 1/x 与 0 ≤ g ≤ x 得到)"""
    if hi <= lo:
        value = sine_g(lo)
        return [(value - ROUNDING_SLACK, value + ROUNDING_SLACK)]
    edges = np.linspace(lo, hi, cells + 1)
    left, right = edges[:-1], edges[1:]
    mid = (left + right) / 2
    half = (right - left) / 2
    safe_left = np.where(left > 0, left, 1.0)
    slope = np.where(left > 0, 1.0 + 1.0 / safe_left, np.inf)
    g_mid = sine_g(mid)
    lower = np.maximum(g_mid - slope * half, 0.0) - ROUNDING_SLACK
    upper = np.minimum(g_mid + slope * half, right) + ROUNDING_SLACK
    lower = np.where(left > 0, lower, -ROUNDING_SLACK)
    return list(zip(lower.tolist(), upper.tolist()))


class SineG:
    """g 作为一维可求值函数"""

    dim = 1
    exact = False

    def __init__(self, cover_cells: int = 256):
        self.domain = unit_cube(1)
        self.cover_cells = cover_cells

    def evaluate(self, x, eps=None) -> FloatBracket:
        x = float(x[0] if isinstance(x, (tuple, list)) else x)
        if not 0 <= x <= 1:
            raise DomainError(f"x={x} 不在 [0,1] 内")
        value = sine_g(x)
        return FloatBracket(value, value)

    def range_bracket(self, region, eps=None) -> FloatBracket:
        lo, hi = _region_bounds(region, 0)
        cells = _g_cells(max(lo, 0.0), min(hi, 1.0), self.cover_cells)
        return FloatBracket(min(c[0] for c in cells), max(c[1] for c in cells))


class SineF:
    """f(x, y) = clamp(y - g(x), 0, 1) 作为二维可求值函数"""

    dim = 2
    exact = False

    def __init__(self, cover_cells: int = 256):
        self.domain = unit_cube(2)
        self.cover_cells = cover_cells

    def evaluate(self, point, eps=None) -> FloatBracket:
        if len(point) != 2:
            raise DimensionError(f"正弦例子需要二维点, 当前维度 {len(point)}")
        x, y = float(point[0]), float(point[1])
        if not (0 <= x <= 1 and 0 <= y <= 1):
            raise DomainError(f"点 ({x}, {y}) 不在 [0,1]² 内")
        value = sine_f(x, y)
        return FloatBracket(value, value)

    def range_bracket(self, region, eps=None) -> FloatBracket:
        """与 g 使用相同的 x 划分: y - g 的范围再截断到 [0,1]"""
        x_lo, x_hi = _region_bounds(region, 0)
        y_lo, y_hi = _region_bounds(region, 1)
        y_lo, y_hi = max(y_lo, 0.0), min(y_hi, 1.0)
        cells = _g_cells(max(x_lo, 0.0), min(x_hi, 1.0), self.cover_cells)
        g_lo = min(c[0] for c in cells)
        g_hi = max(c[1] for c in cells)
        lo = min(max(y_lo - g_hi, 0.0), 1.0)
        hi = min(max(y_hi - g_lo, 0.0), 1.0)
        return FloatBracket(lo, hi)


def _region_bounds(region, axis: int) -> Tuple[float, float]:
    if isinstance(region, Cube):
        return float(region.corner[axis]), float(region.corner[axis] + region.side)
    if isinstance(region, Interval) and axis == 0:
        return float(region.lo), float(region.hi)
    raise ParameterError(f"不支持的区域类型: {type(region).__name__}", constraint="region is Cube or Interval")


def sine_level_set_sample(z: float, grid_n: int, tol: float) -> List[Tuple[float, float]]:
    """网格上 |f - z| ≤ tol 的点"""
    if grid_n < 2:
        raise ParameterError(f"grid_n 必须 ≥ 2, 当前为 {grid_n}", constraint="grid_n ≥ 2")
    axis = np.linspace(0.0, 1.0, grid_n)
    xs, ys = np.meshgrid(axis, axis, indexing="ij")
    values = sine_f(xs, ys)
    mask = np.abs(values - z) <= tol
    return list(zip(xs[mask].tolist(), ys[mask].tolist()))
