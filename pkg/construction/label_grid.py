"""
Whitney立方体内的标记网格

C_j 先同心缩小到边长 ρ·l (ρ = 1 - a/2), 分成每轴 N 格, 每格再同心缩小,
得到边长 (1-a)·l/N 的标记立方体 C_{j,k}, 标签为 Σ k_i·s^{i-1} mod N.
"""

import itertools
import logging
from fractions import Fraction
from typing import Iterator, Optional, Tuple

from errors import DimensionError, ParameterError
from geometry.exactgeom import Cube, ball_in_cube, ceil_sqrt

# 设置日志
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger('label_grid')


def s_min(m: int, a) -> int:
    """
    最小的偶数 s, 使 s ≥ ⌈4√m⌉+2 且 s^m ≥ ⌈16√m/a⌉

    Args:
        m: 维数
        a: 本代分割系数
    """
    a = Fraction(a)
    if m < 1:
        raise DimensionError(f"维数必须 ≥ 1, 当前为 {m}")
    if not 0 < a < 1:
        raise ParameterError(f"分割系数 a={a} 不在 (0,1) 内", constraint="0 < a < 1")
    s = ceil_sqrt(16 * m) + 2
    if s % 2:
        s += 1
    need = ceil_sqrt(Fraction(256 * m) / (a * a))
    while s ** m < need:
        s += 2
    return s


def choose_s(m: int, a, s_rule: Optional[dict] = None) -> int:
    """按配置决定网格参数 s (auto 取最小值, fixed 使用给定值并校验)"""
    s_rule = s_rule or {"kind": "auto"}
    minimum = s_min(m, a)
    if s_rule.get("kind", "auto") == "auto":
        return minimum
    s = int(s_rule.get("s", 0))
    if s % 2 or s < minimum:
        raise ParameterError(
            f"s={s} 不满足要求 (a={a}, m={m} 时最小偶数为 {minimum})",
            constraint=f"s even and s ≥ s_min = {minimum}",
        )
    return s


class LabelGrid:
    """单个Whitney立方体上的标记网格"""

    def __init__(self, parent: Cube, a, s: int):
        """
        初始化标记网格

        Args:
            parent: Whitney立方体 C_j
            a: 本代分割系数 a_n
            s: 网格参数, N = s^m
        """
        self.parent = parent
        self.a = Fraction(a)
        self.m = parent.dim
        minimum = s_min(self.m, self.a)
        if s % 2 or s < minimum:
            raise ParameterError(
                f"s={s} 小于最小值 {minimum} 或不是偶数",
                constraint=f"s even and s ≥ s_min = {minimum}",
            )
        self.s = s
        self.N = s ** self.m
        self.rho = 1 - self.a / 2
        # 网格格子边长与标记立方体边长 (绝对长度)
        self.cell = self.rho * parent.side / self.N
        self.side = (1 - self.a) * parent.side / self.N
        self.origin = tuple(c + (1 - self.rho) * parent.side / 2 for c in parent.corner)
        self.inset = (self.cell - self.side) / 2

    @property
    def gap(self) -> Fraction:
        """相邻标记立方体之间的距离"""
        return self.cell - self.side

    def label(self, k: Tuple[int, ...]) -> int:
        if len(k) != self.m:
            raise DimensionError(f"网格索引维度 {len(k)} 与 m={self.m} 不一致")
        return sum(ki * self.s ** i for i, ki in enumerate(k)) % self.N

    def digits(self, omega: int) -> Tuple[int, ...]:
        """标签 ω 的字典序最小立方体的索引 (ω 的 s 进制各位)"""
        if not 0 <= omega < self.N:
            raise ParameterError(f"标签 {omega} 不在 [0, {self.N}) 内", constraint="0 ≤ ω < N")
        return tuple((omega // self.s ** i) % self.s for i in range(self.m))

    def cube(self, k: Tuple[int, ...]) -> Cube:
        return Cube(tuple(o + self.cell * ki + self.inset for o, ki in zip(self.origin, k)), self.side)

    def iter_cubes(self) -> Iterator[Tuple[Tuple[int, ...], Cube, int]]:
        for k in itertools.product(range(self.N), repeat=self.m):
            yield k, self.cube(k), self.label(k)

    def face_interval(self, axis: int, k: int) -> Tuple[Fraction, Fraction]:
        lo = self.origin[axis] + self.cell * k + self.inset
        return lo, lo + self.side

    def locate(self, point) -> Tuple[Optional[Tuple[int, ...]], bool]:
        """
        点所在的网格格子及是否在标记立方体 (闭) 内

        Returns:
            (索引, 是否在标记立方体内); 点在网格外时索引为 None
        """
        index = []
        inside = True
        for axis, p in enumerate(point):
            v = (p - self.origin[axis]) / self.cell
            k = v.numerator // v.denominator
            if k == self.N and v == self.N:
                k = self.N - 1
            if not 0 <= k < self.N:
                return None, False
            lo, hi = self.face_interval(axis, k)
            if not lo <= p <= hi:
                inside = False
            index.append(k)
        return tuple(index), inside

    def axis_cell(self, axis: int, p: Fraction) -> Tuple[Fraction, Fraction]:
        """
        坐标 p 所在的断点区间, 断点为 {C_j 的两个面, 所有标记立方体的面}
        """
        lower = self.parent.corner[axis]
        upper = lower + self.parent.side
        v = (p - self.origin[axis]) / self.cell
        k = v.numerator // v.denominator
        if k < 0:
            return lower, self.face_interval(axis, 0)[0]
        if k >= self.N:
            return self.face_interval(axis, self.N - 1)[1], upper
        lo, hi = self.face_interval(axis, k)
        if p < lo:
            left = self.face_interval(axis, k - 1)[1] if k > 0 else lower
            return left, lo
        if p > hi:
            right = self.face_interval(axis, k + 1)[0] if k + 1 < self.N else upper
            return hi, right
        return lo, hi

    def face_index(self, axis: int, coord: Fraction) -> Optional[int]:
        """coord 是哪个标记立方体在该轴上的面坐标; 不是则返回 None"""
        v = (coord - self.origin[axis] - self.inset) / self.cell
        k = v.numerator // v.denominator
        for candidate in (k, k - 1):
            if 0 <= candidate < self.N:
                lo, hi = self.face_interval(axis, candidate)
                if coord in (lo, hi):
                    return candidate
        return None

    def separation_ok(self) -> bool:
        """
        同标签的两个不同立方体在某个坐标上至少相差 s

        等价于: 任意 |d_i| ≤ s-1 的非零偏移都有 Σ d_i s^{i-1} ≢ 0 (mod N).
        """
        span = range(-(self.s - 1), self.s)
        for d in itertools.product(span, repeat=self.m):
            if any(d) and sum(di * self.s ** i for i, di in enumerate(d)) % self.N == 0:
                logger.warning(f"标签分离失败, 偏移 {d}")
                return False
        return True

    def fiber_coverage_ok(self) -> bool:
        """每条 k_1 方向的纤维都包含全部 N 个标签"""
        for rest in itertools.product(range(self.N), repeat=self.m - 1):
            labels = {self.label((k1,) + rest) for k1 in range(self.N)}
            if len(labels) != self.N:
                return False
        return True

    def ball_fits(self) -> bool:
        """
        以标记立方体任一点为心, 半径 2√m·边长 的球落在 C_j 内

        只需检查角上格子的立方体顶点.
        """
        radius_sq = 4 * self.m * self.side * self.side
        for corner_index in itertools.product((0, self.N - 1), repeat=self.m):
            for vertex in self.cube(corner_index).vertices():
                if not ball_in_cube(vertex, radius_sq, self.parent, squared=True):
                    return False
        return True

    def y_uncovered_fraction(self) -> Fraction:
        """标记立方体在 P_y 方向上未覆盖的相对测度"""
        return 1 - (self.N * self.side / self.parent.side) ** (self.m - 1)
