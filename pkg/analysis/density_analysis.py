"""
密度诊断: 环形空洞检查与计数密度比

F_z 用网格上的计数代理: 下降到第 n+1 代且该代长方体高度范围与 [z-tol, z+tol] 相交的点.
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

from construction.buildmd import ChainCertificate, MdFunction
from errors import ParameterError
from geometry.exactgeom import Cube, Interval, ceil_sqrt, format_point, format_scalar

# 设置日志
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger('density_analysis')

# 环形检查要求的最小代数
MIN_ANNULUS_GENERATION = 2

CHAIN_PROXY = "chain"
LEVEL_PROXY = "level"


@dataclass
class AnnulusVerdict:
    """B(x,2r_n) \\ B(x,r_n) 中是否没有 F_z 的样本点"""

    vacant: bool
    inconclusive: bool = False
    cause: str = ""
    generation: int = 0
    resolution: Optional[Fraction] = None
    gap: Optional[Fraction] = None
    tol: Optional[Fraction] = None
    checked: int = 0
    offending: List[tuple] = field(default_factory=list)

    def to_dict(self) -> dict:
        def fmt(value):
            return format_scalar(value) if value is not None else None

        return {
            "vacant": self.vacant,
            "inconclusive": self.inconclusive,
            "cause": self.cause,
            "generation": self.generation,
            "resolution": fmt(self.resolution),
            "gap": fmt(self.gap),
            "tol": fmt(self.tol),
            "checked": self.checked,
            "offending": [format_point(p) for p in self.offending],
        }


@dataclass
class DensityReport:
    """计数代理下的密度 D̂(r), D̂(2r) 及其比值"""

    center: tuple
    radius: float
    s_exponent: int
    count_inner: int
    count_outer: int
    weight: Fraction = Fraction(1)
    level: Optional[Fraction] = None

    @property
    def defined(self) -> bool:
        return self.count_inner > 0

    @property
    def ratio(self) -> Optional[Fraction]:
        """D̂(2r)/D̂(r) = 2^{-s}·|S∩B(x,2r)|/|S∩B(x,r)|"""
        if not self.defined:
            return None
        return Fraction(self.count_outer, self.count_inner) / 2 ** self.s_exponent

    @property
    def density_inner(self) -> Optional[float]:
        return float(self.count_inner * self.weight) / (2 * self.radius) ** self.s_exponent

    @property
    def density_outer(self) -> Optional[float]:
        return float(self.count_outer * self.weight) / (4 * self.radius) ** self.s_exponent

    def to_dict(self) -> dict:
        return {
            "level": format_scalar(self.level) if self.level is not None else None,
            "center": [format_scalar(c) for c in self.center],
            "radius": self.radius,
            "s": self.s_exponent,
            "count_inner": self.count_inner,
            "count_outer": self.count_outer,
            "ratio": format_scalar(self.ratio) if self.defined else None,
            "defined": self.defined,
            "flag": density_flag(self),
        }


def annulus_window(cert: ChainCertificate, n: int) -> Cube:
    """包含 B(x, 2r_n) 的有理立方体, 半边长 l(Q_{n+1})·⌈2√m⌉"""
    half = cert.nodes[n + 1].base.side * ceil_sqrt(4 * cert.m)
    return Cube(tuple(c - half for c in cert.point), 2 * half)


def required_resolution(cert: ChainCertificate, n: int) -> int:
    """网格间距不超过第 n 代标记立方体间距时每轴所需的最少点数"""
    if not 0 <= n < cert.depth:
        raise ParameterError(f"n={n} 不在链的范围 [0, {cert.depth}) 内", constraint="0 ≤ n < depth")
    side = annulus_window(cert, n).side
    gap = cert.grids[n].gap
    steps = side / gap
    return -(-steps.numerator // steps.denominator) + 1


def _grid_points(window: Cube, grid_n: int):
    steps = [Fraction(i, grid_n - 1) for i in range(grid_n)]
    for offsets in itertools.product(steps, repeat=window.dim):
        yield tuple(c + window.side * o for c, o in zip(window.corner, offsets))


def annulus_vacancy(
    f: MdFunction,
    cert: ChainCertificate,
    n: int,
    grid_n: Optional[int] = None,
    tol=None,
    proxy: str = CHAIN_PROXY,
    level=None,
) -> AnnulusVerdict:
    """
    检查 F_z ∩ B(x,2r_n) = F_z ∩ B(x,r_n) 的网格版本

    Args:
        f: m维构造
        cert: find_level_point 给出的链
        n: 代数, 2 ≤ n < depth
        grid_n: 每轴网格点数, 默认取 required_resolution
        tol: 水平容差, 默认取标签间隙的一半
        proxy: "chain" 用 F_z 代理; "level" 用求值区间 (包含平台等全部水平集点)
        level: 覆盖证书的水平 (用于注入检查)

    Returns:
        AnnulusVerdict: 分辨率不够或参数越界时 inconclusive, 不会给出错误的 vacant
    """
    z = Fraction(level) if level is not None else cert.level
    verdict = AnnulusVerdict(vacant=False, generation=n)
    if not cert.ok:
        verdict.inconclusive = True
        verdict.cause = "证书无效或为例外水平"
        return verdict
    if n < MIN_ANNULUS_GENERATION or n >= cert.depth:
        verdict.inconclusive = True
        verdict.cause = f"n={n} 需要满足 {MIN_ANNULUS_GENERATION} ≤ n < {cert.depth}"
        return verdict

    window = annulus_window(cert, n)
    grid_n = grid_n or required_resolution(cert, n)
    if grid_n < 2:
        raise ParameterError(f"grid_n 必须 ≥ 2, 当前为 {grid_n}", constraint="grid_n ≥ 2")
    verdict.resolution = window.side / (grid_n - 1)
    verdict.gap = cert.grids[n].gap
    label_gap = cert.label_gap(n)
    verdict.tol = Fraction(tol) if tol is not None else label_gap / 2
    if verdict.resolution > verdict.gap:
        verdict.inconclusive = True
        verdict.cause = "网格间距大于标记立方体间距"
        return verdict
    if proxy == CHAIN_PROXY and verdict.tol >= label_gap:
        verdict.inconclusive = True
        verdict.cause = "容差不小于标签区间间隙"
        return verdict

    x_hat = cert.point
    r_sq = cert.radius_sq(n)
    start = cert.nodes[n]
    target = Interval(z - verdict.tol, z + verdict.tol)
    min_generation = n + 1 if proxy == CHAIN_PROXY else 0
    eps = max(verdict.tol, Fraction(1, 2 ** 40))
    for point in _grid_points(window, grid_n):
        dist_sq = sum((p - c) ** 2 for p, c in zip(point, x_hat))
        if not r_sq < dist_sq <= 4 * r_sq:
            continue
        verdict.checked += 1
        if f.in_level_proxy(start, point, target, eps, min_generation):
            verdict.offending.append(point)

    verdict.vacant = not verdict.offending
    logger.info(
        f"环形检查 n={n}: 检查 {verdict.checked} 个点, "
        f"{'空' if verdict.vacant else f'发现 {len(verdict.offending)} 个点'}"
    )
    return verdict


def density_ratio(points: Sequence, x, r=None, s_exponent: int = 1, radius_sq=None, weight=1, level=None) -> DensityReport:
    """
    计数密度: D̂(r) = |S∩B(x,r)|·w/(2r)^s 以及 D̂(2r)/D̂(r)

    Args:
        points: 点集 S
        x: 中心
        r: 半径 (与 radius_sq 二选一)
        s_exponent: 维数指数 s
        radius_sq: 半径的平方 (用于无理半径)
        weight: 每个点的权重
    """
    if radius_sq is None:
        if r is None or r <= 0:
            raise ParameterError(f"半径必须为正: {r}", constraint="r > 0")
        radius_sq = Fraction(r) * Fraction(r)
    radius_sq = Fraction(radius_sq)
    if radius_sq <= 0:
        raise ParameterError("半径必须为正", constraint="r > 0")
    center = tuple(x)
    inner = outer = 0
    for p in points:
        d = sum((Fraction(pi) - ci) ** 2 for pi, ci in zip(p, center))
        if d <= radius_sq:
            inner += 1
        if d <= 4 * radius_sq:
            outer += 1
    report = DensityReport(
        center=center,
        radius=float(radius_sq) ** 0.5,
        s_exponent=s_exponent,
        count_inner=inner,
        count_outer=outer,
        weight=Fraction(weight),
        level=Fraction(level) if level is not None else None,
    )
    if not report.defined:
        logger.warning("B(x,r) 内没有样本点, 密度比无定义")
    return report


def density_flag(report: DensityReport) -> str:
    """
    单侧经验标志: 比值一直停在 2^{-s} 说明密度不趋于 1 (不可求长的迹象)
    """
    if not report.defined:
        return "undefined"
    if report.ratio == Fraction(1, 2 ** report.s_exponent):
        return "not_density_one"
    return "inconclusive"


def density_at_certificate(f: MdFunction, cert: ChainCertificate, n: int, grid_n: Optional[int] = None, tol=None) -> DensityReport:
    """在链的中心点, 以 r = r_n 计算 F_z 代理的密度比"""
    if not 0 <= n < cert.depth:
        raise ParameterError(f"n={n} 不在链的范围 [0, {cert.depth}) 内", constraint="0 ≤ n < depth")
    window = annulus_window(cert, n)
    grid_n = grid_n or required_resolution(cert, n)
    tol = Fraction(tol) if tol is not None else cert.label_gap(n) / 2
    target = Interval(cert.level - tol, cert.level + tol)
    eps = max(tol, Fraction(1, 2 ** 40))
    r_sq = cert.radius_sq(n)
    start = cert.nodes[n]
    points = []
    for point in _grid_points(window, grid_n):
        if sum((p - c) ** 2 for p, c in zip(point, cert.point)) > 4 * r_sq:
            continue
        if f.in_level_proxy(start, point, target, eps, n + 1):
            points.append(point)
    return density_ratio(points, cert.point, s_exponent=cert.m - 1, radius_sq=r_sq, level=cert.level)
