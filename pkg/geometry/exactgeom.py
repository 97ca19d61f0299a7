"""
精确有理几何: 标量, 区间, 立方体, 长方体以及投影和度量查询

所有构造几何都使用 fractions.Fraction, 不做任何舍入.
"""

from dataclasses import dataclass
from math import isqrt
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

from errors import DimensionError, DomainError, ParameterError

Scalar = Fraction
Point = Tuple[Fraction, ...]
ScalarLike = Union[Fraction, int, str]


def parse_scalar(value: ScalarLike) -> Fraction:
    """
    把 "p/q", 整数, 十进制字符串或 Fraction 转成规范有理数

    Args:
        value: 输入值

    Returns:
        Fraction: 约分后的有理数
    """
    if isinstance(value, bool):
        raise ParameterError(f"无法把布尔值解析为有理数: {value}", constraint="rational")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, float)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as e:
            raise ParameterError(f"无法解析有理数 '{value}': {str(e)}", constraint="rational")
    raise ParameterError(f"不支持的有理数类型: {type(value).__name__}", constraint="rational")


def format_scalar(value: Fraction) -> str:
    """有理数序列化为 "p/q" (整数也写成 "n/1")"""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_point(text: Union[str, Sequence[ScalarLike]]) -> Point:
    """解析逗号分隔的坐标, 如 "1/3,1/4" """
    if isinstance(text, str):
        parts = [p for p in text.split(",") if p.strip()]
    else:
        parts = list(text)
    if not parts:
        raise ParameterError("坐标为空", constraint="point")
    return tuple(parse_scalar(p) for p in parts)


def format_point(point: Iterable[Fraction]) -> list:
    return [format_scalar(c) for c in point]


@dataclass(frozen=True)
class Interval:
    """闭区间 [lo, hi]"""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise DomainError(f"区间端点顺序错误: [{self.lo}, {self.hi}]")

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, value) -> bool:
        return self.lo <= value <= self.hi

    def interior_contains(self, value) -> bool:
        return self.lo < value < self.hi

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def affine(self, t) -> Fraction:
        """归一化坐标 t∈[0,1] 对应的点"""
        return self.lo + self.length * t

    def to_dict(self) -> dict:
        return {"lo": format_scalar(self.lo), "hi": format_scalar(self.hi)}


@dataclass(frozen=True)
class Cube:
    """轴平行立方体, corner 为最小角点"""

    corner: Point
    side: Fraction

    def __post_init__(self):
        object.__setattr__(self, "corner", tuple(Fraction(c) for c in self.corner))
        object.__setattr__(self, "side", Fraction(self.side))
        if self.side <= 0:
            raise DomainError(f"立方体边长必须为正: {self.side}")
        if not self.corner:
            raise DimensionError("立方体维度至少为1")

    @property
    def dim(self) -> int:
        return len(self.corner)

    @property
    def upper(self) -> Point:
        return tuple(c + self.side for c in self.corner)

    @property
    def center(self) -> Point:
        half = self.side / 2
        return tuple(c + half for c in self.corner)

    @property
    def diameter_sq(self) -> Fraction:
        return self.dim * self.side * self.side

    def axis_interval(self, axis: int) -> Interval:
        return Interval(self.corner[axis], self.corner[axis] + self.side)

    def _check_dim(self, point):
        if len(point) != self.dim:
            raise DimensionError(f"点的维度 {len(point)} 与立方体维度 {self.dim} 不一致")

    def contains(self, point) -> bool:
        self._check_dim(point)
        return all(c <= p <= c + self.side for c, p in zip(self.corner, point))

    def interior_contains(self, point) -> bool:
        self._check_dim(point)
        return all(c < p < c + self.side for c, p in zip(self.corner, point))

    def on_boundary(self, point) -> bool:
        return self.contains(point) and not self.interior_contains(point)

    def boundary_gap(self, point) -> Fraction:
        """内点到边界的 ℓ∞ 距离 (各轴到最近面的最小值)"""
        self._check_dim(point)
        return min(min(p - c, c + self.side - p) for c, p in zip(self.corner, point))

    def contains_cube(self, other: "Cube") -> bool:
        return all(
            c <= o and o + other.side <= c + self.side
            for c, o in zip(self.corner, other.corner)
        )

    def face_gap(self, inner: "Cube") -> Fraction:
        """内部立方体到本立方体边界的距离 (欧氏距离与 ℓ∞ 一致)"""
        return min(
            min(o - c, (c + self.side) - (o + inner.side))
            for c, o in zip(self.corner, inner.corner)
        )

    def normalize(self, point) -> Point:
        """把点映射到单位立方体坐标"""
        return tuple((p - c) / self.side for c, p in zip(self.corner, point))

    def denormalize(self, local) -> Point:
        return tuple(c + self.side * u for c, u in zip(self.corner, local))

    def concentric(self, factor) -> "Cube":
        """同中心, 边长乘以 factor 的立方体"""
        new_side = self.side * factor
        margin = (self.side - new_side) / 2
        return Cube(tuple(c + margin for c in self.corner), new_side)

    def drop_first(self) -> "Cube":
        if self.dim < 2:
            raise DimensionError("m = 1 时 P_y 没有定义")
        return Cube(self.corner[1:], self.side)

    def vertices(self):
        for mask in range(2 ** self.dim):
            yield tuple(
                c + (self.side if (mask >> i) & 1 else 0)
                for i, c in enumerate(self.corner)
            )

    def to_dict(self) -> dict:
        return {"corner": format_point(self.corner), "side": format_scalar(self.side)}


@dataclass(frozen=True)
class Box:
    """长方体 Q = C × [z, z+h]"""

    base: Cube
    height: Interval

    def __post_init__(self):
        if self.height.hi <= self.height.lo:
            raise DomainError(f"长方体高度必须为正: {self.height}")

    @classmethod
    def from_projections(cls, base: Cube, height: Interval) -> "Box":
        return cls(base, height)

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def length(self) -> Fraction:
        return self.base.side

    @property
    def h(self) -> Fraction:
        return self.height.length

    def to_dict(self) -> dict:
        return {"base": self.base.to_dict(), "height": self.height.to_dict()}


def project(b: Box, which: str):
    """
    长方体的投影 P_x, P_y, P_z

    Args:
        b: 长方体
        which: 'x', 'y' 或 'z'

    Returns:
        Cube | Interval: P_x 为底面立方体, P_z 为高度区间, P_y 去掉第一个坐标
    """
    if which == "x":
        return b.base
    if which == "z":
        return b.height
    if which == "y":
        return b.base.drop_first()
    raise ParameterError(f"未知的投影方向: {which}", constraint="which ∈ {x, y, z}")


def aspect(b: Box) -> Fraction:
    """高长比 h(b)/l(b)"""
    return b.h / b.length


def dist_sq_to_cube(point, cube: Cube) -> Fraction:
    """点到闭立方体的欧氏距离平方"""
    total = Fraction(0)
    for p, c in zip(point, cube.corner):
        if p < c:
            total += (c - p) ** 2
        elif p > c + cube.side:
            total += (p - c - cube.side) ** 2
    return total


def farthest_sq_to_cube(point, cube: Cube) -> Fraction:
    """点到立方体最远点的距离平方"""
    total = Fraction(0)
    for p, c in zip(point, cube.corner):
        total += max(p - c, c + cube.side - p) ** 2
    return total


def ball_in_cube(center, radius, cube: Cube, squared: bool = False) -> bool:
    """
    闭欧氏球 B(center, radius) 是否包含在闭立方体中

    Args:
        center: 球心
        radius: 半径; squared=True 时表示半径的平方 (用于 √m·l 这样的无理半径)
        cube: 立方体
        squared: radius 是否为平方值

    Returns:
        bool: 精确比较结果, 相切算包含
    """
    if len(center) != cube.dim:
        raise DimensionError(f"球心维度 {len(center)} 与立方体维度 {cube.dim} 不一致")
    radius = Fraction(radius)
    if radius < 0:
        raise ParameterError(f"半径不能为负: {radius}", constraint="radius ≥ 0")
    radius_sq = radius if squared else radius * radius
    for p, c in zip(center, cube.corner):
        low_gap = p - c
        high_gap = c + cube.side - p
        if low_gap < 0 or high_gap < 0:
            return False
        if low_gap * low_gap < radius_sq or high_gap * high_gap < radius_sq:
            return False
    return True


def cube_in_ball(cube: Cube, center, radius_sq) -> bool:
    """立方体是否包含在闭球 B(center, √radius_sq) 中"""
    return farthest_sq_to_cube(center, cube) <= Fraction(radius_sq)


def ball_meets_cube(center, radius_sq, cube: Cube) -> bool:
    """闭球与闭立方体是否相交"""
    return dist_sq_to_cube(center, cube) <= Fraction(radius_sq)


def unit_cube(m: int) -> Cube:
    return Cube(tuple(Fraction(0) for _ in range(m)), Fraction(1))


def unit_box(m: int) -> Box:
    return Box(unit_cube(m), Interval(Fraction(0), Fraction(1)))


def ceil_sqrt(value) -> int:
    """满足 t² ≥ value 的最小非负整数 t (value 为有理数)"""
    value = Fraction(value)
    if value <= 0:
        return 0
    t = isqrt(value.numerator // value.denominator)
    while t * t < value:
        t += 1
    while t > 0 and (t - 1) * (t - 1) >= value:
        t -= 1
    return t
