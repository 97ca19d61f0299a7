"""
有限水平集诊断: 对采样的 y 统计已解析的原像分量个数
"""

import logging
from fractions import Fraction
from typing import Iterable

import pandas as pd

from errors import DomainError
from geometry.exactgeom import Interval, format_scalar, parse_scalar, unit_cube

# 设置日志
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger('diagnostics')


class IdentityFunction:
    """恒等函数, 作为诊断与振荡分析的参照"""

    dim = 1
    exact = True

    def __init__(self):
        self.domain = unit_cube(1)

    def evaluate(self, x, eps=None):
        from construction.build1d import EvalResult

        x = parse_scalar(x[0] if isinstance(x, (tuple, list)) else x)
        if not 0 <= x <= 1:
            raise DomainError(f"x={x} 不在 [0,1] 内")
        return EvalResult(x, x, 0, cause="identity")

    def range_bracket(self, region, eps=None) -> Interval:
        if hasattr(region, "corner"):
            lo, hi = region.corner[0], region.corner[0] + region.side
        else:
            lo, hi = region.lo, region.hi
        return Interval(max(Fraction(lo), Fraction(0)), min(Fraction(hi), Fraction(1)))

    def preimage_components(self, y, depth: int):
        y = parse_scalar(y)
        return [{"generation": 0, "kind": "point", "x": y}], 0


def finite_levels_diagnostic(f, ys: Iterable, depth: int) -> pd.DataFrame:
    """
    每个 y 的原像分量个数

    Args:
        f: 提供 preimage_components(y, depth) -> (分量列表, 未解析个数) 的函数
        ys: 采样水平
        depth: 解析深度

    Returns:
        DataFrame: 列 y, components, points, plateaus, unresolved
    """
    rows = []
    for y in ys:
        components, unresolved = f.preimage_components(y, depth)
        rows.append({
            "y": format_scalar(parse_scalar(y)),
            "components": len(components),
            "points": sum(1 for c in components if c["kind"] == "point"),
            "plateaus": sum(1 for c in components if c["kind"] == "plateau"),
            "unresolved": unresolved,
        })
    logger.info(f"完成 {len(rows)} 个水平的原像统计 (深度 {depth})")
    return pd.DataFrame(rows, columns=["y", "components", "points", "plateaus", "unresolved"])
