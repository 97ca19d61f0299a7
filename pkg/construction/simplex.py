"""
Kuhn (Freudenthal) 单纯剖分上的分片线性插值

轴平行格子的每个单元按坐标排序剖分成 m! 个单纯形, 相邻单元的剖分在公共面上一致.
"""

from fractions import Fraction
from typing import Callable, List, Sequence, Tuple

from errors import DimensionError, DomainError


def kuhn_weights(lambdas: Sequence[Fraction]) -> List[Tuple[Tuple[int, ...], Fraction]]:
    """
    单位立方体内一点在Kuhn单纯形中的重心坐标

    Args:
        lambdas: 单元内的局部坐标, 每个分量在 [0,1] 内

    Returns:
        List[(顶点偏移, 权重)]: m+1 个顶点, 权重非负且和为 1
    """
    m = len(lambdas)
    if m == 0:
        raise DimensionError("局部坐标为空")
    if any(not 0 <= lam <= 1 for lam in lambdas):
        raise DomainError(f"局部坐标不在单位立方体内: {list(lambdas)}")

    # 稳定排序, 相等分量按轴序
    order = sorted(range(m), key=lambda i: -lambdas[i])
    vertex = [0] * m
    result = [(tuple(vertex), 1 - lambdas[order[0]])]
    for j, axis in enumerate(order):
        vertex[axis] = 1
        following = lambdas[order[j + 1]] if j + 1 < m else Fraction(0)
        result.append((tuple(vertex), lambdas[axis] - following))
    return result


def kuhn_interpolate(
    cell_lo: Sequence[Fraction],
    cell_hi: Sequence[Fraction],
    point: Sequence[Fraction],
    vertex_value: Callable[[Tuple[Fraction, ...]], Fraction],
) -> Fraction:
    """
    在轴平行单元 [cell_lo, cell_hi] 上按Kuhn剖分插值顶点值

    Args:
        cell_lo: 单元下角
        cell_hi: 单元上角
        point: 单元内的点
        vertex_value: 顶点 -> 值

    Returns:
        Fraction: 精确插值结果
    """
    if not len(cell_lo) == len(cell_hi) == len(point):
        raise DimensionError("单元与点的维度不一致")
    lambdas = []
    for lo, hi, p in zip(cell_lo, cell_hi, point):
        if hi <= lo:
            raise DomainError(f"退化单元: [{lo}, {hi}]")
        lambdas.append((p - lo) / (hi - lo))

    total = Fraction(0)
    for offsets, weight in kuhn_weights(lambdas):
        if weight == 0:
            continue
        corner = tuple(hi if o else lo for lo, hi, o in zip(cell_lo, cell_hi, offsets))
        total += weight * vertex_value(corner)
    return total
