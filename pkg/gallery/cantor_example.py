"""
改造的Cantor函数: Cantor集上与Cantor函数一致, 每个第 n 代空隙上的平台换成锯齿,
锯齿的像是长度 2^{-(n-1)} 的二进区间, 同一代的像覆盖 [0,1]
"""

import logging
from fractions import Fraction
from typing import List, Tuple, Union

from construction.build1d import EvalResult
from errors import DomainError, ParameterError
from geometry.exactgeom import Cube, Interval, format_scalar, parse_scalar, unit_cube

# 设置日志
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger('cantor_example')

# 空隙剖面节点: (相对位置, 取值标记), c 为平台值, A/B 为像区间的下/上端
GAP_KNOTS = (
    (Fraction(0), "c"),
    (Fraction(1, 10), "B"),
    (Fraction(1, 4), "B"),
    (Fraction(2, 5), "A"),
    (Fraction(3, 5), "A"),
    (Fraction(1), "c"),
)


def cantor_gap_images(n: int) -> List[Interval]:
    """第 n 代 2^{n-1} 个空隙的像, 自左向右"""
    if n < 1:
        raise ParameterError(f"代数必须 ≥ 1, 当前为 {n}", constraint="n ≥ 1")
    size = Fraction(1, 2 ** (n - 1))
    return [Interval(i * size, (i + 1) * size) for i in range(2 ** (n - 1))]


def _gap_values(n: int, i: int) -> dict:
    size = Fraction(1, 2 ** (n - 1))
    return {"A": i * size, "B": (i + 1) * size, "c": Fraction(2 * i + 1, 2 ** n)}


def _gap_knots(n: int, i: int) -> List[Tuple[Fraction, Fraction]]:
    values = _gap_values(n, i)
    return [(t, values[tag]) for t, tag in GAP_KNOTS]


def gap_value(n: int, i: int, t: Fraction) -> Fraction:
    """第 n 代第 i 个空隙在相对位置 t 处的值"""
    knots = _gap_knots(n, i)
    for (t0, v0), (t1, v1) in zip(knots, knots[1:]):
        if t <= t1:
            return v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    return knots[-1][1]


class CantorModified:
    """改造的Cantor函数 (中三分之一Cantor集)"""

    dim = 1
    exact = True

    def __init__(self, depth: int = 24):
        """
        初始化

        Args:
            depth: 三进制展开的最大位数
        """
        if depth < 1:
            raise ParameterError(f"depth 必须 ≥ 1, 当前为 {depth}", constraint="depth ≥ 1")
        self.depth = depth
        self.domain = unit_cube(1)

    def evaluate(self, x, eps=None) -> EvalResult:
        """
        逐位读取三进制数字

        Returns:
            EvalResult: 有限展开或落在空隙时精确; 否则为宽 2^{-depth} 的区间
        """
        if isinstance(x, (tuple, list)):
            x = x[0]
        x = parse_scalar(x)
        if not 0 <= x <= 1:
            raise DomainError(f"x={x} 不在 [0,1] 内")
        if x == 1:
            return EvalResult(Fraction(1), Fraction(1), 0, cause="endpoint")

        limit = self.depth
        if eps is not None:
            eps = parse_scalar(eps)
            while limit > 1 and Fraction(1, 2 ** (limit - 1)) <= eps:
                limit -= 1

        value = Fraction(0)
        prefix = 0
        rest = x
        for n in range(1, limit + 1):
            rest *= 3
            digit = rest.numerator // rest.denominator
            rest -= digit
            if digit == 1:
                v = gap_value(n, prefix, rest)
                return EvalResult(v, v, n, cause="gap")
            bit = digit // 2
            value += Fraction(bit, 2 ** n)
            prefix = 2 * prefix + bit
            if rest == 0:
                return EvalResult(value, value, n, cause="cantor")
        width = Fraction(1, 2 ** limit)
        return EvalResult(value, value + width, limit, partial=eps is None or width > eps, cause="depth")

    def range_bracket(self, region: Union[Interval, Cube], eps) -> Interval:
        """区间上的可信取值范围; 整个三进区间的像就是对应的二进区间"""
        if isinstance(region, Cube):
            lo, hi = region.corner[0], region.corner[0] + region.side
        else:
            lo, hi = region.lo, region.hi
        lo, hi = max(parse_scalar(lo), Fraction(0)), min(parse_scalar(hi), Fraction(1))
        if lo > hi:
            raise DomainError(f"区间 [{lo}, {hi}] 与定义域不相交")
        result = self._range(Fraction(0), Fraction(0), 0, 0, lo, hi, parse_scalar(eps))
        return Interval(result[0], result[1])

    def _range(self, x0, v0, n, prefix, lo, hi, eps) -> Tuple[Fraction, Fraction]:
        length = Fraction(1, 3 ** n)
        height = Fraction(1, 2 ** n)
        lo, hi = max(lo, x0), min(hi, x0 + length)
        if lo == x0 and hi == x0 + length:
            return v0, v0 + height
        if lo == hi:
            value = self.evaluate(lo, eps)
            return value.lo, value.hi
        if height <= eps or n >= self.depth:
            return v0, v0 + height

        third = length / 3
        parts = []
        if lo <= x0 + third:
            parts.append(self._range(x0, v0, n + 1, 2 * prefix, lo, hi, eps))
        if hi >= x0 + 2 * third:
            parts.append(self._range(x0 + 2 * third, v0 + height / 2, n + 1, 2 * prefix + 1, lo, hi, eps))
        gap_lo, gap_hi = max(lo, x0 + third), min(hi, x0 + 2 * third)
        if gap_lo <= gap_hi:
            t_lo, t_hi = (gap_lo - x0 - third) / third, (gap_hi - x0 - third) / third
            candidates = [gap_value(n + 1, prefix, t_lo), gap_value(n + 1, prefix, t_hi)]
            candidates += [v for t, v in _gap_knots(n + 1, prefix) if t_lo < t < t_hi]
            parts.append((min(candidates), max(candidates)))
        return min(p[0] for p in parts), max(p[1] for p in parts)

    def preimage_components(self, y, depth: int) -> Tuple[list, int]:
        comps = cantor_preimage_components(y, depth)
        return comps, 0


def cantor_modified_eval(cm: CantorModified, x, eps=None) -> EvalResult:
    return cm.evaluate(x, eps)


def cantor_function(x, depth: int = 60) -> Fraction:
    """经典Cantor函数 (有限三进制展开时精确)"""
    x = parse_scalar(x)
    if x == 1:
        return Fraction(1)
    value = Fraction(0)
    for n in range(1, depth + 1):
        x *= 3
        digit = x.numerator // x.denominator
        x -= digit
        if digit == 1:
            return value + Fraction(1, 2 ** n)
        value += Fraction(digit // 2, 2 ** n)
        if x == 0:
            break
    return value


def cantor_preimage_components(y, depth: int) -> list:
    """
    y 在前 depth 代空隙中的原像分量

    每一代恰有一个空隙的像包含 y (二进区间的公共端点处取两个), 分量为点或平台区间.

    Returns:
        list: 每项为 {"generation", "gap", "kind", "x" 或 "interval"}
    """
    y = parse_scalar(y)
    if not 0 <= y <= 1:
        raise DomainError(f"水平 y={y} 不在 [0,1] 内")
    if depth < 1:
        raise ParameterError(f"depth 必须 ≥ 1, 当前为 {depth}", constraint="depth ≥ 1")

    components = []
    for n in range(1, depth + 1):
        count = 2 ** (n - 1)
        scaled = y * count
        first = min(scaled.numerator // scaled.denominator, count - 1)
        gaps = [first - 1, first] if scaled.denominator == 1 and 0 < scaled <= count - 1 else [first]
        for i in gaps:
            x0 = _gap_left(n, i)
            width = Fraction(1, 3 ** n)
            pieces = list(zip(_gap_knots(n, i), _gap_knots(n, i)[1:]))
            found = []
            for (t0, v0), (t1, v1) in pieces:
                if v0 == v1 == y:
                    found.append({
                        "generation": n, "gap": i, "kind": "plateau",
                        "interval": Interval(x0 + width * t0, x0 + width * t1),
                    })
            for (t0, v0), (t1, v1) in pieces:
                if v0 != v1 and min(v0, v1) <= y <= max(v0, v1):
                    x = x0 + width * (t0 + (t1 - t0) * (y - v0) / (v1 - v0))
                    if x0 < x < x0 + width and not any(_touches(c, x) for c in found):
                        found.append({"generation": n, "gap": i, "kind": "point", "x": x})
            components.extend(found)
    logger.debug(f"y={format_scalar(y)} 在前 {depth} 代共有 {len(components)} 个原像分量")
    return components


def _touches(component: dict, x: Fraction) -> bool:
    if component["kind"] == "point":
        return component["x"] == x
    return component["interval"].contains(x)


def _gap_left(n: int, i: int) -> Fraction:
    """第 n 代第 i 个空隙的左端点"""
    x = Fraction(0)
    for k in range(n - 1):
        bit = (i >> (n - 2 - k)) & 1
        x += Fraction(2 * bit, 3 ** (k + 1))
    return x + Fraction(1, 3 ** n)
