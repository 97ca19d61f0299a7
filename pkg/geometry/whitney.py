"""
Whitney分解: 区间 (一维对角线) 与开立方体 (m维构造的第一步)
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Tuple

from errors import EmptyFamilyError, ParameterError
from geometry.exactgeom import Cube, Interval, ceil_sqrt, format_point, format_scalar

# 设置日志
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger('whitney')

LEFT = "left"
RIGHT = "right"


@dataclass(frozen=True)
class WhitneySegment:
    """区间Whitney分解中的一段, side 表示它向哪个端点聚集"""

    interval: Interval
    scale_index: int
    side: str

    def to_dict(self) -> dict:
        return {
            "interval": self.interval.to_dict(),
            "scale_index": self.scale_index,
            "side": self.side,
        }


@dataclass(frozen=True)
class WhitneyCube:
    cube: Cube
    scale_index: int

    def to_dict(self) -> dict:
        return {
            "corner": format_point(self.cube.corner),
            "side": format_scalar(self.cube.side),
            "scale_index": self.scale_index,
        }


def normalized_segment(k: int, side: str) -> Tuple[Fraction, Fraction]:
    """单位区间上第k层的段: 左侧 [2^{-k-1}, 2^{-k}], 右侧为其镜像"""
    lo = Fraction(1, 2 ** (k + 1))
    hi = Fraction(1, 2 ** k)
    if side == LEFT:
        return lo, hi
    return 1 - hi, 1 - lo


def whitney_interval(parent: Interval, max_k: int) -> List[WhitneySegment]:
    """
    区间的二进Whitney分解

    Args:
        parent: 非退化区间
        max_k: 最大层数 (≥ 1)

    Returns:
        List[WhitneySegment]: 按层排列, 每层先左后右; 每段长度等于它到最近端点的距离
    """
    if parent.length <= 0:
        raise ParameterError(f"退化区间无法分解: {parent}", constraint="parent nondegenerate")
    if max_k < 1:
        raise ParameterError(f"max_k 必须 ≥ 1, 当前为 {max_k}", constraint="max_k ≥ 1")

    segments = []
    for k in range(1, max_k + 1):
        for side in (LEFT, RIGHT):
            lo, hi = normalized_segment(k, side)
            segments.append(
                WhitneySegment(Interval(parent.affine(lo), parent.affine(hi)), k, side)
            )
    return segments


def end_gap(max_k: int) -> Fraction:
    """截断到 max_k 后每个端点处未覆盖的归一化长度"""
    return Fraction(1, 2 ** (max_k + 1))


def locate_segment(t: Fraction, max_k: int) -> Optional[Tuple[int, str]]:
    """
    找到归一化坐标 t 所在的段

    Returns:
        (k, side); t 落在端部空隙时返回 None. 段端点处取左侧的段.
    """
    if t <= 0 or t >= 1:
        return None
    if t <= Fraction(1, 2):
        side = LEFT
        u = t
    else:
        side = RIGHT
        u = 1 - t
    # u ∈ (0, 1/2]: 找 k 使 2^{-k-1} ≤ u ≤ 2^{-k}
    k = 1
    while Fraction(1, 2 ** (k + 1)) > u:
        k += 1
        if k > max_k:
            return None
    if side == LEFT and u == Fraction(1, 2 ** (k + 1)) and k + 1 <= max_k:
        # 左侧段之间的公共端点, 取左边 (更靠近端点) 的段
        k += 1
    return k, side


def is_segment_endpoint(t: Fraction) -> bool:
    """t 是否为某段的端点 (2^{-j} 或 1 - 2^{-j})"""
    for u in (t, 1 - t):
        if u <= 0:
            return True
        if u.numerator == 1 and (u.denominator & (u.denominator - 1)) == 0:
            return True
    return False


def _gap(index: Tuple[int, ...], level: int) -> int:
    top = 2 ** level - 1
    return min(min(i, top - i) for i in index)


def _levels(parent: Cube, min_side: Fraction) -> int:
    """满足 l·2^{-k} ≥ min_side 的最大 k"""
    k = 0
    while parent.side / 2 ** (k + 1) >= min_side:
        k += 1
    return k


def _cube_at(parent: Cube, index: Tuple[int, ...], level: int) -> Cube:
    side = parent.side / 2 ** level
    return Cube(tuple(c + side * i for c, i in zip(parent.corner, index)), side)


def iter_whitney_cubes(parent: Cube, min_side: Fraction) -> Iterator[WhitneyCube]:
    """
    自顶向下的二进Whitney族, 按边长从大到小, 同层按角点字典序

    diam ≤ dist 时输出 (用平方比较: m ≤ gap²); 父立方体失败保证 dist ≤ 4·diam.
    """
    min_side = Fraction(min_side)
    if min_side <= 0:
        raise ParameterError(f"min_side 必须为正: {min_side}", constraint="min_side > 0")
    if min_side >= parent.side:
        raise EmptyFamilyError(f"min_side={min_side} 不小于父立方体边长 {parent.side}")

    m = parent.dim
    max_level = _levels(parent, min_side)
    frontier = [tuple(bits) for bits in _binary_indices(m)]
    for level in range(2, max_level + 1):
        emitted = []
        next_frontier = []
        for index in frontier:
            for offset in _binary_indices(m):
                child = tuple(2 * i + o for i, o in zip(index, offset))
                gap = _gap(child, level)
                if gap * gap >= m:
                    emitted.append(child)
                else:
                    next_frontier.append(child)
        for child in sorted(emitted):
            yield WhitneyCube(_cube_at(parent, child, level), level)
        frontier = next_frontier


def _binary_indices(m: int):
    for mask in range(2 ** m):
        yield tuple((mask >> i) & 1 for i in range(m))


def whitney_cubes(parent: Cube, min_side: Fraction) -> List[WhitneyCube]:
    """
    截断的二进Whitney族

    Args:
        parent: 开立方体
        min_side: 最小边长

    Returns:
        List[WhitneyCube]: 满足 diam ≤ dist ≤ 4·diam 的立方体
    """
    family = list(iter_whitney_cubes(parent, min_side))
    if not family:
        raise EmptyFamilyError(f"min_side={min_side} 截断后Whitney族为空")
    logger.debug(f"Whitney分解完成: {len(family)} 个立方体, 最小边长 {min_side}")
    return family


def locate_whitney_cube(parent: Cube, point, min_side: Optional[Fraction] = None) -> Optional[WhitneyCube]:
    """
    不枚举整个族, 直接找到包含该点的Whitney立方体

    Args:
        min_side: 截断边长; None 表示完整的族 (内点一定能找到)

    Returns:
        WhitneyCube; 点在边界上或落在截断剩余部分时返回 None
    """
    if not parent.interior_contains(point):
        return None
    m = parent.dim
    local = parent.normalize(point)
    levels = itertools.count(1) if min_side is None else range(1, _levels(parent, Fraction(min_side)) + 1)
    for level in levels:
        scale = 2 ** level
        index = tuple(min(int(u * scale), scale - 1) for u in local)
        gap = _gap(index, level)
        if gap * gap >= m:
            return WhitneyCube(_cube_at(parent, index, level), level)
    return None


def is_whitney_index(index: Tuple[int, ...], level: int) -> bool:
    """第 level 层的二进立方体是否属于完整的Whitney族 (父立方体的间隙是 gap // 2)"""
    m = len(index)
    gap = _gap(index, level)
    return gap * gap >= m and (gap // 2) ** 2 < m


def slab_whitney_cubes(parent: Cube, x1: Fraction, level: int) -> Optional[List[WhitneyCube]]:
    """
    第 level 层中第一坐标范围严格包含 x1 的Whitney立方体 (不一定全部, 按角点排序)

    其余坐标只试靠近各个面的几个下标和中点, 层数足够深时一定有候选.

    Returns:
        x1 恰好是该层的二进分点时返回 None
    """
    if level < 1:
        raise ParameterError(f"level 必须 ≥ 1, 当前为 {level}", constraint="level ≥ 1")
    scale = 2 ** level
    u = (Fraction(x1) - parent.corner[0]) / parent.side * scale
    if not 0 < u < scale:
        raise ParameterError(f"x1={x1} 不在父立方体的第一坐标范围内", constraint="x1 ∈ int P_1(parent)")
    if u.denominator == 1:
        return None
    i1 = u.numerator // u.denominator
    m = parent.dim
    window = 2 * ceil_sqrt(m) + 2
    near = sorted({k for k in range(min(window, scale))} | {scale - 1 - k for k in range(min(window, scale))})
    middle = scale // 2
    candidates = {(i1,) + (middle,) * (m - 1)}
    for axis in range(1, m):
        for k in near:
            index = [middle] * m
            index[0] = i1
            index[axis] = k
            candidates.add(tuple(index))
    return [
        WhitneyCube(_cube_at(parent, index, level), level)
        for index in sorted(candidates)
        if is_whitney_index(index, level)
    ]


def residual_measure(parent: Cube, min_side: Fraction) -> Fraction:
    """截断族没有覆盖的 m 维测度"""
    covered = sum((w.cube.side ** parent.dim for w in iter_whitney_cubes(parent, min_side)), Fraction(0))
    return parent.side ** parent.dim - covered


def check_comparability(parent: Cube, wc: WhitneyCube) -> bool:
    """精确验证 diam ≤ dist ≤ 4·diam (平方比较)"""
    dist = parent.face_gap(wc.cube)
    diam_sq = wc.cube.diameter_sq
    return diam_sq <= dist * dist <= 16 * diam_sq
