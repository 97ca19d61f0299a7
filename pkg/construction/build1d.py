"""
一维构造: f: [0,1] → [0,1], 每个值的水平集都是无穷集, 但下标度振荡处处有限

函数以惰性矩形树表示. 每个矩形 Q 被竖直分成 Q' 与 Q'':
Q'' 上放锯齿剖面, Q' 的对角线再做Whitney分解得到子矩形.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from errors import DimensionError, DomainError, ParameterError
from geometry.exactgeom import Box, Cube, Interval, aspect, format_scalar, parse_scalar
from geometry.whitney import (
    LEFT,
    RIGHT,
    end_gap,
    is_segment_endpoint,
    locate_segment,
    normalized_segment,
    whitney_interval,
)

# 设置日志
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger('build1d')

DEFAULT_WIDTHS = ("3/20", "3/20", "3/10", "1/5", "1/5")


@dataclass(frozen=True)
class ParamSeq:
    """
    分割系数序列 a_n

    kind="dyadic" 时 a_n = 2^{-(n+offset)}; kind="explicit" 时直接给出前若干项.
    """

    kind: str = "dyadic"
    offset: int = 3
    values: Tuple[Fraction, ...] = ()
    depth_cap: int = 64

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(parse_scalar(v) for v in self.values))
        self.validate()

    def validate(self):
        if self.depth_cap < 1:
            raise ParameterError(f"depth_cap 必须 ≥ 1, 当前为 {self.depth_cap}", constraint="depth_cap ≥ 1")
        if self.kind == "dyadic":
            if self.offset < 3:
                raise ParameterError(
                    f"offset={self.offset} 使 Σa_n = 2^(1-offset) > 1/4",
                    constraint="Σ a_n ≤ 1/4",
                )
        elif self.kind == "explicit":
            if len(self.values) < self.depth_cap:
                raise ParameterError(
                    f"显式序列长度 {len(self.values)} 小于 depth_cap={self.depth_cap}",
                    constraint="len(values) ≥ depth_cap",
                )
            for n, a in enumerate(self.values):
                if not 0 < a < 1:
                    raise ParameterError(f"a_{n}={a} 不在 (0,1) 内", constraint="0 < a_n < 1")
            if sum(self.values, Fraction(0)) > Fraction(1, 4):
                raise ParameterError("显式序列的和超过 1/4", constraint="Σ a_n ≤ 1/4")
        else:
            raise ParameterError(f"未知的 a_rule 类型: {self.kind}", constraint="a_rule.kind ∈ {dyadic, explicit}")

    def a(self, n: int) -> Fraction:
        if n < 0:
            raise ParameterError(f"代数 n 不能为负: {n}", constraint="n ≥ 0")
        if self.kind == "dyadic":
            return Fraction(1, 2 ** (n + self.offset))
        if n >= len(self.values):
            raise ParameterError(f"显式序列没有第 {n} 项", constraint="n < len(values)")
        return self.values[n]

    def aspect_bound(self, n: int) -> Fraction:
        """∏_{k<n} (1-a_k)^{-1}"""
        bound = Fraction(1)
        for k in range(n):
            bound /= 1 - self.a(k)
        return bound

    def tail_sum(self, start: int) -> Fraction:
        """Σ_{k≥start} a_k (显式序列只计到列表末尾)"""
        if self.kind == "dyadic":
            return Fraction(2, 2 ** (start + self.offset))
        return sum(self.values[start:], Fraction(0))

    def limit_aspect_bound(self) -> Fraction:
        """
        ∏_{n≥0}(1-a_n)^{-1} 的有理上界

        前 depth_cap 项精确相乘, 余项用 1-Σa ≤ ∏(1-a).
        """
        head = self.aspect_bound(self.depth_cap) if self.kind == "dyadic" else self.aspect_bound(len(self.values))
        tail = self.tail_sum(self.depth_cap) if self.kind == "dyadic" else Fraction(0)
        return head / (1 - tail)

    @classmethod
    def from_config(cls, a_rule: dict, depth_cap: int) -> "ParamSeq":
        kind = a_rule.get("kind", "dyadic")
        if kind == "dyadic":
            return cls(kind="dyadic", offset=int(a_rule.get("offset", 3)), depth_cap=depth_cap)
        return cls(kind=kind, values=tuple(a_rule.get("values", ())), depth_cap=depth_cap)

    def to_config(self) -> dict:
        if self.kind == "dyadic":
            return {"kind": "dyadic", "offset": self.offset}
        return {"kind": "explicit", "values": [format_scalar(v) for v in self.values]}


@dataclass(frozen=True)
class ZigzagProfile:
    """
    锯齿剖面: 宽度依次为 (顶部, 下降, 底部, 上升, 顶部), 两端取顶部值

    归一化取值: 顶部为 1, 底部为 0.
    """

    widths: Tuple[Fraction, ...] = tuple(Fraction(w) for w in DEFAULT_WIDTHS)

    def __post_init__(self):
        widths = tuple(parse_scalar(w) for w in self.widths)
        object.__setattr__(self, "widths", widths)
        if len(widths) != 5:
            raise ParameterError(f"锯齿剖面需要5段宽度, 当前 {len(widths)} 段", constraint="5 widths")
        if any(w <= 0 for w in widths):
            raise ParameterError("锯齿剖面宽度必须为正", constraint="widths > 0")
        if sum(widths, Fraction(0)) != 1:
            raise ParameterError("锯齿剖面宽度之和必须为 1", constraint="Σ widths = 1")

    @property
    def breakpoints(self) -> Tuple[Fraction, ...]:
        points = [Fraction(0)]
        for w in self.widths:
            points.append(points[-1] + w)
        return tuple(points)

    @property
    def knots(self) -> List[Tuple[Fraction, Fraction]]:
        b = self.breakpoints
        values = (1, 1, 0, 0, 1, 1)
        return [(b[i], Fraction(values[i])) for i in range(6)]

    def value(self, rel: Fraction) -> Fraction:
        if not 0 <= rel <= 1:
            raise DomainError(f"剖面坐标 {rel} 不在 [0,1] 内")
        knots = self.knots
        for (x0, v0), (x1, v1) in zip(knots, knots[1:]):
            if rel <= x1:
                return v0 + (v1 - v0) * (rel - x0) / (x1 - x0)
        return knots[-1][1]

    def solve(self, tau: Fraction) -> List[Fraction]:
        """0 < tau < 1 时剖面等于 tau 的两个位置 (下降段与上升段)"""
        b = self.breakpoints
        return [b[1] + (1 - tau) * self.widths[1], b[3] + tau * self.widths[3]]

    def bottom_plateau(self) -> Tuple[Fraction, Fraction]:
        b = self.breakpoints
        return b[2], b[3]

    def top_plateaus(self) -> List[Tuple[Fraction, Fraction]]:
        b = self.breakpoints
        return [(b[0], b[1]), (b[4], b[5])]

    def range_on(self, lo: Fraction, hi: Fraction) -> Tuple[Fraction, Fraction]:
        """[lo, hi] 上剖面的最小值与最大值"""
        candidates = [self.value(lo), self.value(hi)]
        candidates += [v for x, v in self.knots if lo < x < hi]
        return min(candidates), max(candidates)

    @classmethod
    def from_config(cls, widths: Optional[Sequence] = None) -> "ZigzagProfile":
        return cls(tuple(widths or DEFAULT_WIDTHS))

    def to_config(self) -> list:
        return [format_scalar(w) for w in self.widths]


@dataclass(frozen=True)
class RectNode:
    """迭代中的一个矩形 Q_{n,i}"""

    box: Box
    generation: int
    role: str = "root"

    @property
    def x0(self) -> Fraction:
        return self.box.base.corner[0]

    @property
    def y0(self) -> Fraction:
        return self.box.height.lo

    @property
    def length(self) -> Fraction:
        return self.box.length

    @property
    def h(self) -> Fraction:
        return self.box.h

    def to_dict(self) -> dict:
        return {
            "generation": self.generation,
            "role": self.role,
            "box": self.box.to_dict(),
            "aspect": format_scalar(aspect(self.box)),
        }


@dataclass(frozen=True)
class EvalResult:
    """取值区间 [lo, hi] 以及解析它的代数"""

    lo: Fraction
    hi: Fraction
    generation: int
    partial: bool = False
    cause: str = ""

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, value) -> bool:
        return self.lo <= value <= self.hi

    def within(self, other: "EvalResult") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def to_dict(self) -> dict:
        return {
            "lo": format_scalar(self.lo),
            "hi": format_scalar(self.hi),
            "generation": self.generation,
            "partial": self.partial,
            "cause": self.cause,
        }


@dataclass
class LevelSetReport:
    """水平集报告: 精确原像点, 平台区间, 未解析的链矩形, 逐代累计计数"""

    level: Fraction
    points: List[Fraction] = field(default_factory=list)
    plateaus: List[Interval] = field(default_factory=list)
    pending: Optional[RectNode] = None
    per_generation: List[int] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "level": format_scalar(self.level),
            "points": [format_scalar(p) for p in sorted(self.points)],
            "plateaus": [p.to_dict() for p in self.plateaus],
            "pending": self.pending.to_dict() if self.pending else None,
            "per_generation": list(self.per_generation),
            "notes": list(self.notes),
        }


def root_node() -> RectNode:
    return RectNode(Box(Cube((Fraction(0),), Fraction(1)), Interval(Fraction(0), Fraction(1))), 0, "root")


def _as_box(q) -> Box:
    return q.box if isinstance(q, RectNode) else q


def split_rect(q, a) -> Tuple[Box, Box]:
    """
    把矩形竖直分成 Q' (左, 宽 (1-a)l) 与 Q'' (右, 宽 al)

    Args:
        q: RectNode 或 Box
        a: 分割系数, 0 < a < 1
    """
    a = parse_scalar(a)
    if not 0 < a < 1:
        raise ParameterError(f"分割系数 a={a} 不在 (0,1) 内", constraint="0 < a < 1")
    box = _as_box(q)
    x0 = box.base.corner[0]
    l = box.length
    left_len = (1 - a) * l
    q_left = Box(Cube((x0,), left_len), box.height)
    q_right = Box(Cube((x0 + left_len,), l - left_len), box.height)
    return q_left, q_right


def zigzag_value(q_right: Box, profile: ZigzagProfile, x) -> Fraction:
    """Q'' 上锯齿剖面的精确值, 两端等于 Q'' 的顶边"""
    x = parse_scalar(x)
    x0 = q_right.base.corner[0]
    l = q_right.length
    if not x0 <= x <= x0 + l:
        raise DomainError(f"x={x} 不在 Q'' 的投影 [{x0}, {x0 + l}] 内")
    rel = (x - x0) / l
    return q_right.height.lo + q_right.h * profile.value(rel)


def _child_box(q_left: Box, lo: Fraction, hi: Fraction) -> Box:
    """对角线在归一化段 [lo, hi] 上对应的子矩形"""
    x0 = q_left.base.corner[0]
    L = q_left.length
    y0 = q_left.height.lo
    h = q_left.h
    return Box(Cube((x0 + L * lo,), L * (hi - lo)), Interval(y0 + h * lo, y0 + h * hi))


def children_1d(q_left: Box, max_k: int, generation: int = 1) -> List[RectNode]:
    """
    Q' 对角线的Whitney段所对应的子矩形

    子矩形的高长比与 Q' 相同.
    """
    x_proj = Interval(Fraction(0), Fraction(1))
    children = []
    for seg in whitney_interval(x_proj, max_k):
        children.append(RectNode(_child_box(q_left, seg.interval.lo, seg.interval.hi), generation, "child"))
    return children


class OneDimFunction:
    """一维构造的惰性求值器"""

    dim = 1
    exact = True

    def __init__(self, params: Optional[ParamSeq] = None, profile: Optional[ZigzagProfile] = None, max_k: int = 48):
        """
        初始化一维构造

        Args:
            params: 分割系数序列
            profile: 锯齿剖面
            max_k: 每条对角线的Whitney段层数
        """
        self.params = params or ParamSeq()
        self.profile = profile or ZigzagProfile()
        if max_k < 1:
            raise ParameterError(f"max_k 必须 ≥ 1, 当前为 {max_k}", constraint="max_k ≥ 1")
        self.max_k = max_k
        self.domain = Cube((Fraction(0),), Fraction(1))
        logger.debug(f"初始化一维构造: a_rule={self.params.to_config()}, max_k={max_k}")

    @staticmethod
    def _scalar(x) -> Fraction:
        if isinstance(x, (tuple, list)):
            if len(x) != 1:
                raise DimensionError(f"一维函数需要一维点, 当前维度 {len(x)}")
            x = x[0]
        return parse_scalar(x)

    def split(self, node: RectNode) -> Tuple[Box, Box]:
        return split_rect(node, self.params.a(node.generation))

    def evaluate(self, x, eps) -> EvalResult:
        """
        沿惰性树下降求值

        Args:
            x: [0,1] 中的有理点
            eps: 期望的区间宽度上界

        Returns:
            EvalResult: 宽度 ≤ eps 的区间, 除非到达 depth_cap (partial)
        """
        x = self._scalar(x)
        eps = parse_scalar(eps)
        if not 0 <= x <= 1:
            raise DomainError(f"x={x} 不在 [0,1] 内")
        if eps <= 0:
            raise ParameterError(f"eps 必须为正: {eps}", constraint="eps > 0")

        node = root_node()
        while True:
            n = node.generation
            x0, y0, l, h = node.x0, node.y0, node.length, node.h
            if x == x0:
                return EvalResult(y0, y0, n, cause="corner")
            if x == x0 + l:
                return EvalResult(y0 + h, y0 + h, n, cause="corner")
            if h <= eps:
                return EvalResult(y0, y0 + h, n, cause="resolved")
            if n >= self.params.depth_cap:
                logger.debug(f"x={x} 到达 depth_cap={self.params.depth_cap}, 返回部分区间")
                return EvalResult(y0, y0 + h, n, partial=True, cause="depth_cap")

            q_left, q_right = self.split(node)
            xs = q_right.base.corner[0]
            if x > xs:
                value = zigzag_value(q_right, self.profile, x)
                return EvalResult(value, value, n, cause="zigzag")

            L = q_left.length
            t = (x - x0) / L
            if is_segment_endpoint(t):
                value = y0 + h * t
                return EvalResult(value, value, n, cause="vertex")

            located = locate_segment(t, self.max_k)
            if located is None:
                g = end_gap(self.max_k)
                lo, hi = (y0, y0 + h * g) if t < Fraction(1, 2) else (y0 + h * (1 - g), y0 + h)
                return EvalResult(lo, hi, n, partial=(hi - lo) > eps, cause="end_gap")
            k, side = located
            seg_lo, seg_hi = normalized_segment(k, side)
            node = RectNode(_child_box(q_left, seg_lo, seg_hi), n + 1, "child")

    def range_bracket(self, region, eps) -> Interval:
        """
        区间上 f 取值范围的可信包围

        完全包含在区间内的子矩形直接取其高度区间; 只与端点部分相交的继续下降.

        Args:
            region: Interval 或一维 Cube
            eps: 下降停止的高度
        """
        if isinstance(region, Cube):
            lo, hi = region.corner[0], region.corner[0] + region.side
        else:
            lo, hi = region.lo, region.hi
        lo = max(self._scalar(lo), Fraction(0))
        hi = min(self._scalar(hi), Fraction(1))
        eps = parse_scalar(eps)
        if lo > hi:
            raise DomainError(f"区间 [{lo}, {hi}] 与定义域不相交")
        result = self._range(root_node(), lo, hi, eps)
        return Interval(result[0], result[1])

    def _range(self, node: RectNode, lo: Fraction, hi: Fraction, eps: Fraction) -> Tuple[Fraction, Fraction]:
        x0, y0, l, h = node.x0, node.y0, node.length, node.h
        lo, hi = max(lo, x0), min(hi, x0 + l)
        if lo == x0 and hi == x0 + l:
            return y0, y0 + h
        if lo == hi:
            value = self.evaluate(lo, eps)
            return value.lo, value.hi
        if h <= eps or node.generation >= self.params.depth_cap:
            return y0, y0 + h

        q_left, q_right = self.split(node)
        xs = q_right.base.corner[0]
        parts = []
        if hi >= xs:
            rel_lo = (max(lo, xs) - xs) / q_right.length
            rel_hi = (hi - xs) / q_right.length
            p_lo, p_hi = self.profile.range_on(rel_lo, rel_hi)
            parts.append((y0 + h * p_lo, y0 + h * p_hi))
        if lo < xs:
            L = q_left.length
            t_lo = (lo - x0) / L
            t_hi = (min(hi, xs) - x0) / L
            g = end_gap(self.max_k)
            if t_lo < g:
                parts.append((y0, y0 + h * min(g, t_hi)))
            if t_hi > 1 - g:
                parts.append((y0 + h * max(1 - g, t_lo), y0 + h))
            for k in range(1, self.max_k + 1):
                for side in (LEFT, RIGHT):
                    s_lo, s_hi = normalized_segment(k, side)
                    if s_hi < t_lo or s_lo > t_hi:
                        continue
                    child = RectNode(_child_box(q_left, s_lo, s_hi), node.generation + 1, "child")
                    if t_lo <= s_lo and s_hi <= t_hi:
                        parts.append((child.y0, child.y0 + child.h))
                    else:
                        parts.append(self._range(child, x0 + L * max(s_lo, t_lo), x0 + L * min(s_hi, t_hi), eps))
        return min(p[0] for p in parts), max(p[1] for p in parts)

    def chain_scales(self, x, depth: int) -> List[Dict]:
        """
        x 留在 Q'_n 内时, 到 Q'_n 对角线最近端点的距离 s_n

        Returns:
            List[dict]: 每项含 generation, scale, vertex, node
        """
        x = self._scalar(x)
        node = root_node()
        chain = []
        while node.generation < depth:
            q_left, q_right = self.split(node)
            x0 = node.x0
            xs = q_right.base.corner[0]
            if not x0 < x < xs:
                break
            left, right = x - x0, xs - x
            s, w = (left, x0) if left <= right else (right, xs)
            chain.append({"generation": node.generation, "scale": s, "vertex": w, "node": node})
            t = (x - x0) / q_left.length
            if is_segment_endpoint(t):
                break
            located = locate_segment(t, self.max_k)
            if located is None:
                break
            seg_lo, seg_hi = normalized_segment(*located)
            node = RectNode(_child_box(q_left, seg_lo, seg_hi), node.generation + 1, "child")
        return chain

    def nodes(self, depth: int, max_k: Optional[int] = None) -> List[RectNode]:
        """展开到指定代数的矩形树 (每层Whitney段截断到 max_k)"""
        max_k = max_k or self.max_k
        frontier = [root_node()]
        result = list(frontier)
        for _ in range(depth):
            next_frontier = []
            for node in frontier:
                q_left, _ = self.split(node)
                next_frontier.extend(children_1d(q_left, max_k, node.generation + 1))
            result.extend(next_frontier)
            frontier = next_frontier
        return result

    def vertices(self, depth: int, k_limit: int) -> List[Dict]:
        """
        构造顶点: 左侧Whitney段子矩形的左下角 (以及根的两个角)

        顶点左边紧挨着长度减半的同侧兄弟矩形, scale 取该兄弟的长度;
        在这个尺度上两侧的取值都落在同一条对角线链的矩形里.

        Returns:
            List[dict]: 每项含 x, generation, scale
        """
        if k_limit >= self.max_k:
            raise ParameterError(f"k_limit={k_limit} 必须小于 max_k={self.max_k}", constraint="k_limit < max_k")
        half = Fraction(1, 2)
        vertices = [
            {"x": Fraction(0), "generation": 0, "scale": half},
            {"x": Fraction(1), "generation": 0, "scale": half},
        ]
        frontier = [root_node()]
        for _ in range(depth):
            next_frontier = []
            for node in frontier:
                q_left, _ = self.split(node)
                for k in range(1, k_limit + 1):
                    for side in (LEFT, RIGHT):
                        lo, hi = normalized_segment(k, side)
                        child = RectNode(_child_box(q_left, lo, hi), node.generation + 1, "child")
                        next_frontier.append(child)
                        if side == LEFT:
                            vertices.append({"x": child.x0, "generation": child.generation, "scale": child.length / 2})
            frontier = next_frontier
        return vertices

    def preimage_components(self, y, depth: int) -> Tuple[list, int]:
        """前 depth 代中 y 的原像分量; 链未在 depth 内终止时记 1 个未解析"""
        report = level_set_1d(self.params, self.profile, y, depth, self.max_k)
        components = [{"generation": None, "kind": "plateau", "interval": p} for p in report.plateaus]
        for x in sorted(set(report.points)):
            if not any(p.contains(x) for p in report.plateaus):
                components.append({"generation": None, "kind": "point", "x": x})
        return components, 1 if report.pending is not None else 0


def eval1d(params: ParamSeq, profile: ZigzagProfile, x, eps, max_k: int = 48) -> EvalResult:
    """一维构造在 x 处的取值区间"""
    return OneDimFunction(params, profile, max_k).evaluate(x, eps)


def level_set_1d(params: ParamSeq, profile: ZigzagProfile, y, depth: int, max_k: int = 48) -> LevelSetReport:
    """
    逐代遍历 P_z 含 y 的矩形, 在其 Q'' 中精确求解锯齿

    Args:
        params: 分割系数
        profile: 锯齿剖面
        y: [0,1] 中的水平
        depth: 遍历的代数 (≥ 1)

    Returns:
        LevelSetReport: 精确原像点, 平台区间, 仍含 y 的链矩形, 逐代累计点数
    """
    y = parse_scalar(y)
    if not 0 <= y <= 1:
        raise DomainError(f"水平 y={y} 不在 [0,1] 内")
    if depth < 1:
        raise ParameterError(f"depth 必须 ≥ 1, 当前为 {depth}", constraint="depth ≥ 1")

    f = OneDimFunction(params, profile, max_k)
    report = LevelSetReport(level=y)
    node = root_node()
    for _ in range(depth):
        n = node.generation
        if n >= params.depth_cap:
            report.notes.append(f"到达 depth_cap={params.depth_cap}")
            break
        q_left, q_right = f.split(node)
        xs = q_right.base.corner[0]
        al = q_right.length
        y0, h = node.y0, node.h

        if y == y0 or y == y0 + h:
            _record_vertex_level(report, node, q_right, profile, y)
            node = None
            break

        tau = (y - y0) / h
        for rel in profile.solve(tau):
            report.points.append(xs + al * rel)
        report.per_generation.append(len(report.points))

        if is_segment_endpoint(tau):
            # y 是两个子矩形的公共角点值
            corner = node.x0 + q_left.length * tau
            report.points.append(corner)
            report.notes.append(f"y={format_scalar(y)} 是第 {n + 1} 代的顶点值")
            for k in range(1, max_k + 1):
                for side in (LEFT, RIGHT):
                    seg_lo, seg_hi = normalized_segment(k, side)
                    if tau not in (seg_lo, seg_hi):
                        continue
                    child = RectNode(_child_box(q_left, seg_lo, seg_hi), n + 1, "child")
                    _, child_right = f.split(child)
                    plateaus = profile.top_plateaus() if seg_hi == tau else [profile.bottom_plateau()]
                    for lo, hi in plateaus:
                        report.plateaus.append(Interval(child_right.base.corner[0] + child_right.length * lo,
                                                        child_right.base.corner[0] + child_right.length * hi))
            node = None
            break

        located = locate_segment(tau, max_k)
        if located is None:
            report.notes.append(f"第 {n} 代: y 落在Whitney截断的端部空隙")
            break
        seg_lo, seg_hi = normalized_segment(*located)
        node = RectNode(_child_box(q_left, seg_lo, seg_hi), n + 1, "child")

    report.pending = node
    logger.debug(f"水平集 y={y}: {len(report.points)} 个点, {len(report.plateaus)} 个平台")
    return report


def _record_vertex_level(report: LevelSetReport, node: RectNode, q_right: Box, profile: ZigzagProfile, y: Fraction):
    xs = q_right.base.corner[0]
    al = q_right.length
    if y == node.y0:
        lo, hi = profile.bottom_plateau()
        report.plateaus.append(Interval(xs + al * lo, xs + al * hi))
        report.points.append(node.x0)
    else:
        for lo, hi in profile.top_plateaus():
            report.plateaus.append(Interval(xs + al * lo, xs + al * hi))
    report.per_generation.append(len(report.points))
    report.notes.append(f"y={format_scalar(y)} 是第 {node.generation} 代矩形的顶点值, 水平集含平台")
