"""
标度振荡分析: osc(x, r)/r 的采样值与可信上界
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import pandas as pd
from tqdm import tqdm

from analysis.sampling import ball_samples
from construction.build1d import ZigzagProfile, children_1d, split_rect
from errors import ParameterError
from geometry.exactgeom import Box, Cube, Interval, dist_sq_to_cube, format_point, format_scalar

# 设置日志
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger('oscillation_analysis')


@dataclass(frozen=True)
class OscillationEstimate:
    """单个尺度上的振荡: 采样最大差与可信上界"""

    radius: object
    sampled: object
    certified: object
    samples: int
    partial: bool = False


@dataclass
class OscillationProfile:
    """一点处各尺度的振荡比"""

    point: tuple
    estimates: List[OscillationEstimate] = field(default_factory=list)

    @property
    def scales(self) -> list:
        return [e.radius for e in self.estimates]

    @property
    def sampled_ratios(self) -> list:
        return [e.sampled / e.radius for e in self.estimates]

    @property
    def certified_ratios(self) -> list:
        return [e.certified / e.radius for e in self.estimates]

    @property
    def lower(self):
        """有限尺度下的 l_f 估计 (可信比的最小值)"""
        return min(self.certified_ratios)

    @property
    def upper(self):
        """有限尺度下的 L_f 估计 (采样比的最大值)"""
        return max(self.sampled_ratios)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "r": [float(r) for r in self.scales],
            "sampled_ratio": [float(v) for v in self.sampled_ratios],
            "certified_ratio": [float(v) for v in self.certified_ratios],
        })

    def to_dict(self) -> dict:
        def fmt(value):
            return format_scalar(value) if isinstance(value, (Fraction, int)) else float(value)

        return {
            "point": [fmt(c) for c in self.point],
            "scales": [fmt(r) for r in self.scales],
            "sampled_ratios": [fmt(v) for v in self.sampled_ratios],
            "certified_ratios": [fmt(v) for v in self.certified_ratios],
            "lower": fmt(self.lower),
            "upper": fmt(self.upper),
        }


def _as_point(x) -> tuple:
    return tuple(x) if isinstance(x, (tuple, list)) else (x,)


def _cover_regions(center, radius, cells: int) -> Iterable[Cube]:
    """把外接立方体 [x-r, x+r]^m 分成 cells^m 个格子, 只保留与球相交的"""
    side = 2 * radius / cells
    radius_sq = radius * radius
    for index in itertools.product(range(cells), repeat=len(center)):
        cube = Cube(tuple(c - radius + side * i for c, i in zip(center, index)), side)
        if dist_sq_to_cube(center, cube) <= radius_sq:
            yield cube


def _meets_domain(cube: Cube, domain: Cube) -> bool:
    return all(c + cube.side >= d and c <= d + domain.side for c, d in zip(cube.corner, domain.corner))


def oscillation(f, x, r, budget: int, eps=None, cover_cells: int = 16, seed: float = 0.5) -> OscillationEstimate:
    """
    osc(x, r) = sup_{|y-x| ≤ r} |f(y) - f(x)| 的采样值与可信上界

    Args:
        f: 提供 dim, exact, domain, evaluate(x, eps), range_bracket(region, eps) 的函数
        x: 中心点
        r: 半径 (> 0)
        budget: 拟随机采样点个数
        eps: 求值精度, 默认 r/16
        cover_cells: 覆盖格子数 (每轴)

    Returns:
        OscillationEstimate: sampled ≤ certified
    """
    if r <= 0:
        raise ParameterError(f"半径必须为正: {r}", constraint="r > 0")
    if budget < 0:
        raise ParameterError(f"采样预算不能为负: {budget}", constraint="budget ≥ 0")
    point = _as_point(x)
    eps = eps if eps is not None else r / 16
    center = f.evaluate(point, eps)
    partial = bool(getattr(center, "partial", False))

    # 采样
    sampled = 0
    sample_bound = 0
    samples = ball_samples(point, r, budget, f.domain, exact=f.exact, seed=seed)
    center_mid = (center.lo + center.hi) / 2
    for y in samples:
        value = f.evaluate(y, eps)
        partial = partial or bool(getattr(value, "partial", False))
        sampled = max(sampled, abs((value.lo + value.hi) / 2 - center_mid))
        sample_bound = max(sample_bound, value.hi - center.lo, center.hi - value.lo)

    # 覆盖
    cover_bound = 0
    if f.dim == 1:
        lo = max(point[0] - r, f.domain.corner[0])
        hi = min(point[0] + r, f.domain.corner[0] + f.domain.side)
        regions = [Interval(lo, hi)]
    else:
        regions = [c for c in _cover_regions(point, r, cover_cells) if _meets_domain(c, f.domain)]
    for region in regions:
        bracket = f.range_bracket(region, eps)
        cover_bound = max(cover_bound, bracket.hi - center.lo, center.hi - bracket.lo)

    return OscillationEstimate(r, sampled, max(cover_bound, sample_bound), len(samples), partial)


def scaled_profile(f, x, scales: Sequence, budget: int = 64, cover_cells: int = 16, seed: float = 0.5) -> OscillationProfile:
    """
    在一组严格递减的尺度上计算振荡比

    Args:
        f: 可求值函数
        x: 中心点
        scales: 严格递减的正尺度

    Returns:
        OscillationProfile: lower 为最小可信比, upper 为最大采样比
    """
    scales = list(scales)
    if not scales:
        raise ParameterError("尺度列表为空", constraint="scales nonempty")
    if any(r <= 0 for r in scales) or any(a <= b for a, b in zip(scales, scales[1:])):
        raise ParameterError("尺度必须为正且严格递减", constraint="scales strictly decreasing, positive")
    profile = OscillationProfile(point=_as_point(x))
    for r in scales:
        profile.estimates.append(oscillation(f, x, r, budget, cover_cells=cover_cells, seed=seed))
    return profile


def dyadic_scales(k_min: int, k_max: int) -> List[Fraction]:
    """2^{-k_min} > ... > 2^{-k_max}"""
    if k_min > k_max:
        raise ParameterError(f"k_min={k_min} 大于 k_max={k_max}", constraint="k_min ≤ k_max")
    return [Fraction(1, 2 ** k) for k in range(k_min, k_max + 1)]


def merge_scales(*groups: Iterable) -> list:
    """合并多组尺度, 去重后降序排列"""
    return sorted({r for group in groups for r in group if r > 0}, reverse=True)


def vertex_constant_from_aspect(aspect_bound, zigzag: bool = True) -> Fraction:
    """
    由高长比上界 A 得到顶点振荡常数 C*

    顶点两侧: 一侧在子矩形的对角线链内 (斜率 ≤ A), 另一侧在相邻矩形的平台或链内,
    球内的取值变化不超过 2A·r; 只有对角线时为 A.
    """
    aspect_bound = Fraction(aspect_bound)
    if aspect_bound <= 0:
        raise ParameterError(f"高长比上界必须为正: {aspect_bound}", constraint="A > 0")
    return 2 * aspect_bound if zigzag else aspect_bound


def _split_a(seq, n: int) -> Fraction:
    # 显式序列只到 depth_cap 为止
    return seq.a(min(n, seq.depth_cap - 1))


def _unit_box(height) -> Box:
    return Box(Cube((Fraction(0),), Fraction(1)), Interval(Fraction(0), Fraction(height)))


def _height_span(children, lo, hi) -> Tuple[Fraction, Fraction]:
    """与 (lo, hi) 相交的子矩形高度的并"""
    meeting = [c for c in children if c.x0 < hi and c.x0 + c.length > lo]
    return min(c.y0 for c in meeting), max(c.y0 + c.h for c in meeting)


def root_corner_ratios(seq, profile: ZigzagProfile, zigzag: bool = True, k_limit: int = 8) -> List[Fraction]:
    """根矩形两个角点在尺度 1/2 上的可信振荡比"""
    half = Fraction(1, 2)
    q_left, _ = split_rect(_unit_box(1), seq.a(0))
    children = children_1d(q_left, k_limit)
    _, top = _height_span(children, 0, half)
    bottom, _ = _height_span(children, half, 1)
    if zigzag:
        # Q'' 整个落在 [1/2, 1] 内
        bottom = min(bottom, profile.range_on(Fraction(0), Fraction(1))[0])
    return [top / half, (1 - bottom) / half]


def generation_vertex_ratios(seq, n: int, height, k_limit: int = 4) -> List[Fraction]:
    """
    一代子矩形构型中各顶点的可信振荡比

    高为 height 的单位长矩形按 a_n 分裂, 顶点 w 是 Q' 左侧Whitney段子矩形 R 的左下角, r = l(R)/2.
    [w-r, w] 恰好是长度减半的兄弟矩形; [w, w+r] 用 R 按 a_{n+1} 再分裂后的子矩形高度包住.
    """
    q_left, _ = split_rect(_unit_box(height), _split_a(seq, n))
    # whitney_interval 每层先左后右
    lefts = children_1d(q_left, k_limit + 1, n + 1)[0::2]
    ratios = []
    for child, sibling in zip(lefts, lefts[1:]):
        r = child.length / 2
        inner_left, _ = split_rect(child, _split_a(seq, n + 1))
        _, top = _height_span(children_1d(inner_left, k_limit, n + 2), child.x0, child.x0 + r)
        ratios.append(max(top - child.y0, child.y0 - sibling.y0) / r)
    return ratios


def certified_vertex_constant(params, profile: Optional[ZigzagProfile] = None, zigzag: bool = True,
                              generations: int = 8, k_limit: int = 4) -> Fraction:
    """
    构造参数对应的可信顶点常数 C*: 枚举一代子矩形构型, 取顶点振荡比的最大值

    前 generations 代用精确的高长比 ∏(1-a_k)^{-1}; 之后各代的构型都被
    "父矩形高长比取极限上界 A, 分裂系数取 a_generations" 的构型控制.
    结果不超过粗略估计 2A.

    Args:
        params: ParamSeq 或带 seq 属性的 MdParams
        profile: 锯齿剖面, 默认 ZigzagProfile()
        zigzag: 是否含锯齿 (退化的纯对角线构造为 False)
    """
    seq = getattr(params, "seq", params)
    profile = profile or getattr(params, "profile", None) or ZigzagProfile()
    ratios = root_corner_ratios(seq, profile, zigzag)
    head = min(generations, seq.depth_cap)
    for n in range(head):
        ratios += generation_vertex_ratios(seq, n, seq.aspect_bound(n), k_limit)
    ratios += generation_vertex_ratios(seq, head, seq.limit_aspect_bound(), k_limit)
    cstar = max(ratios)
    coarse = vertex_constant_from_aspect(seq.limit_aspect_bound())
    assert cstar <= coarse, f"一代构型的顶点常数 {cstar} 超过 2A = {coarse}"
    logger.debug(f"顶点常数 C* = {format_scalar(cstar)} (2A = {format_scalar(coarse)})")
    return cstar


class OscillationAnalysis:
    """按配置批量计算振荡剖面"""

    def __init__(self, config=None, seed: float = 0.5):
        """
        初始化振荡分析

        Args:
            config: ANALYSIS_CONFIG 形式的配置
            seed: 拟随机序列起点
        """
        self.config = config or {}
        scales = self.config.get("scales", {})
        self.k_min = int(scales.get("k_min", 1))
        self.k_max = int(scales.get("k_max", 16))
        self.budget = int(self.config.get("budget", 64))
        self.cover_cells = int(self.config.get("cover_cells", 16))
        self.seed = seed
        logger.info(f"初始化振荡分析: 尺度 2^-{self.k_min}..2^-{self.k_max}, 采样 {self.budget}")

    def scales(self, extra: Iterable = ()) -> list:
        return merge_scales(dyadic_scales(self.k_min, self.k_max), extra)

    def profile(self, f, x, extra_scales: Iterable = ()) -> OscillationProfile:
        return scaled_profile(f, x, self.scales(extra_scales), self.budget, self.cover_cells, self.seed)

    def survey(self, f, points: Sequence, extra_scales=None, show_progress: bool = False) -> pd.DataFrame:
        """
        多点的振荡比汇总

        Args:
            f: 可求值函数
            points: 点列表
            extra_scales: 可选, 点 -> 额外尺度 的函数

        Returns:
            DataFrame: 每点一行, 含 lower 与 upper
        """
        rows = []
        for x in tqdm(points, disable=not show_progress, desc="振荡剖面"):
            extra = extra_scales(x) if extra_scales else ()
            profile = self.profile(f, x, extra)
            rows.append({
                "point": format_point(_as_point(x)) if f.exact else list(_as_point(x)),
                "lower": profile.lower,
                "upper": profile.upper,
            })
        logger.info(f"完成 {len(rows)} 个点的振荡剖面")
        return pd.DataFrame(rows)
