"""
m维构造: f: [0,1]^m → [0,1], 几乎每个水平集都不可求长, 下标度振荡处处有限

每个长方体 Q = K × [z, z+h] 上:
1. 对 K 做Whitney分解, 每个 C_j 得到子长方体 R_j (对角平面在 C_j 上的高度范围)
2. C_j 内放 N^m 个标记立方体, 同标签立方体相距足够远
3. R_j 的高度区间分成 N 份, 标签 ω 对应第 ω 份
4. 标记立方体内部: 外斜坡, 锯齿带, 内斜坡, 核心立方体递归
5. 其余窄条用Kuhn剖分分片线性插值
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from construction.build1d import EvalResult, ParamSeq, ZigzagProfile
from construction.label_grid import LabelGrid, choose_s
from construction.simplex import kuhn_interpolate
from errors import ConstructionError, DimensionError, DomainError, ParameterError
from geometry.exactgeom import (
    Box,
    Cube,
    Interval,
    aspect,
    ball_in_cube,
    ceil_sqrt,
    cube_in_ball,
    format_point,
    format_scalar,
    parse_point,
    parse_scalar,
    unit_box,
    unit_cube,
)
from geometry.whitney import WhitneyCube, iter_whitney_cubes, locate_whitney_cube, slab_whitney_cubes

# 设置日志
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger('buildmd')


@dataclass(frozen=True)
class DiagonalPlane:
    """只依赖 x_1 的对角平面 z = z_lo + slope·(x_1 - x_1,lo)"""

    box: Box
    slope: Fraction

    @classmethod
    def from_box(cls, box: Box) -> "DiagonalPlane":
        return cls(box, aspect(box))

    def value(self, x1) -> Fraction:
        return self.box.height.lo + self.slope * (x1 - self.box.base.corner[0])


@dataclass(frozen=True)
class CuboidNode:
    """长方体 Q_{n,i} = C × [z, z+h]"""

    box: Box
    generation: int
    role: str = "root"

    @property
    def base(self) -> Cube:
        return self.box.base

    @property
    def alpha(self) -> Fraction:
        return aspect(self.box)

    @property
    def z0(self) -> Fraction:
        return self.box.height.lo

    @property
    def h(self) -> Fraction:
        return self.box.h

    @property
    def plane(self) -> DiagonalPlane:
        return DiagonalPlane.from_box(self.box)

    def to_dict(self) -> dict:
        return {
            "generation": self.generation,
            "role": self.role,
            "box": self.box.to_dict(),
            "alpha": format_scalar(self.alpha),
        }


@dataclass(frozen=True)
class CellResult(EvalResult):
    """单代求值结果; child 不为空时需要继续在核心长方体中下降"""

    child: Optional[CuboidNode] = None
    region: str = ""


@dataclass
class ChainCertificate:
    """嵌套长方体链 Q_0 ⊃ Q_1 ⊃ ... 以及球包含关系的精确验证"""

    level: Fraction
    m: int
    nodes: List[CuboidNode] = field(default_factory=list)
    whitney: List[WhitneyCube] = field(default_factory=list)
    labels: List[int] = field(default_factory=list)
    labeled_cubes: List[Cube] = field(default_factory=list)
    grids: List[LabelGrid] = field(default_factory=list)
    etas: List[Fraction] = field(default_factory=list)
    a_values: List[Fraction] = field(default_factory=list)
    verified: List[bool] = field(default_factory=list)
    flags: List[str] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return len(self.nodes) - 1

    @property
    def point(self) -> Tuple[Fraction, ...]:
        return self.nodes[-1].base.center

    @property
    def ok(self) -> bool:
        return self.depth > 0 and all(self.verified) and not {"exceptional", "truncated"} & set(self.flags)

    def radius_sq(self, n: int) -> Fraction:
        """r_n² = m·l(Q_{n+1})²"""
        side = self.nodes[n + 1].base.side
        return self.m * side * side

    def label_gap(self, n: int) -> Fraction:
        """第 n 代不同标签的核心区间与 z 的最小距离下界"""
        return self.a_values[n] * self.etas[n] / 2

    def to_dict(self) -> dict:
        return {
            "level": format_scalar(self.level),
            "m": self.m,
            "point": format_point(self.point),
            "chain": [node.to_dict() for node in self.nodes],
            "whitney": [wc.to_dict() for wc in self.whitney],
            "labels": list(self.labels),
            "labeled_cubes": [cube.to_dict() for cube in self.labeled_cubes],
            "radii_sq": [format_scalar(self.radius_sq(n)) for n in range(self.depth)],
            "verified": list(self.verified),
            "flags": list(self.flags),
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class MdParams:
    """m维构造的参数"""

    m: int = 2
    seq: ParamSeq = field(default_factory=lambda: ParamSeq(depth_cap=8))
    s_rule: Tuple[Tuple[str, object], ...] = (("kind", "auto"),)
    profile: ZigzagProfile = field(default_factory=ZigzagProfile)
    whitney_depth: int = 6
    search_levels: int = 64

    def __post_init__(self):
        if self.m < 2:
            raise DimensionError(f"m维构造需要 m ≥ 2, 当前为 {self.m}")
        if self.whitney_depth < 3:
            raise ParameterError(
                f"whitney_depth={self.whitney_depth} 太小, Whitney族为空",
                constraint="whitney_depth ≥ 3",
            )
        if self.search_levels < 1:
            raise ParameterError(
                f"search_levels 必须 ≥ 1, 当前为 {self.search_levels}",
                constraint="search_levels ≥ 1",
            )

    @property
    def depth_cap(self) -> int:
        return self.seq.depth_cap

    def a(self, n: int) -> Fraction:
        return self.seq.a(n)

    def s(self, n: int) -> int:
        return choose_s(self.m, self.a(n), dict(self.s_rule))

    @classmethod
    def from_config(cls, cfg: dict) -> "MdParams":
        seq = ParamSeq.from_config(cfg.get("a_rule", {"kind": "dyadic", "offset": 3}), int(cfg.get("depth_cap", 8)))
        return cls(
            m=int(cfg.get("m", 2)),
            seq=seq,
            s_rule=tuple(sorted(cfg.get("s_rule", {"kind": "auto"}).items())),
            profile=ZigzagProfile.from_config(cfg.get("profile")),
            whitney_depth=int(cfg.get("whitney_depth", 6)),
            search_levels=int(cfg.get("search_levels", 64)),
        )

    def to_config(self) -> dict:
        return {
            "m": self.m,
            "a_rule": self.seq.to_config(),
            "s_rule": dict(self.s_rule),
            "profile": self.profile.to_config(),
            "depth_cap": self.depth_cap,
            "whitney_depth": self.whitney_depth,
            "search_levels": self.search_levels,
        }


def root_cuboid(m: int) -> CuboidNode:
    return CuboidNode(unit_box(m), 0, "root")


def labeled_subcubes(cj: WhitneyCube, a, s: int) -> List[Tuple[Cube, int]]:
    """
    C_j 中的 N^m 个标记立方体及其标签

    Args:
        cj: Whitney立方体
        a: 本代分割系数
        s: 网格参数 (偶数, 不小于最小值)
    """
    cube = cj.cube if isinstance(cj, WhitneyCube) else cj
    grid = LabelGrid(cube, parse_scalar(a), s)
    return [(c, label) for _, c, label in grid.iter_cubes()]


def child_cuboid(q: CuboidNode, cj) -> CuboidNode:
    """R_j = C_j × P_z(D ∩ P_x^{-1}(C_j))"""
    cube = cj.cube if isinstance(cj, WhitneyCube) else cj
    z_j = q.plane.value(cube.corner[0])
    return CuboidNode(Box(cube, Interval(z_j, z_j + q.alpha * cube.side)), q.generation + 1, "whitney")


def label_intervals(rj: CuboidNode, n_labels: int) -> Dict[int, Interval]:
    """把 P_z(R_j) 等分成 N 份, 标签 ω 取自下而上第 ω 份"""
    if n_labels < 1:
        raise ParameterError(f"标签数必须 ≥ 1, 当前为 {n_labels}", constraint="N ≥ 1")
    eta = rj.h / n_labels
    return {omega: Interval(rj.z0 + omega * eta, rj.z0 + (omega + 1) * eta) for omega in range(n_labels)}


def core_interval(w: Fraction, eta: Fraction, a: Fraction) -> Interval:
    """标签区间 [w, w+η] 中留给核心长方体的部分"""
    return Interval(w + a * eta / 2, w + eta - a * eta / 2)


class MdFunction:
    """m维构造的惰性求值器"""

    exact = True

    def __init__(self, params: Optional[MdParams] = None):
        self.params = params or MdParams()
        self.dim = self.params.m
        self.domain = unit_cube(self.dim)
        self._grids: Dict[Tuple[Cube, int], LabelGrid] = {}

    def _point(self, x) -> Tuple[Fraction, ...]:
        point = parse_point(x) if isinstance(x, str) else tuple(parse_scalar(c) for c in x)
        if len(point) != self.dim:
            raise DimensionError(f"点的维度 {len(point)} 与 m={self.dim} 不一致")
        return point

    def grid(self, node: CuboidNode, cube: Cube) -> LabelGrid:
        key = (cube, node.generation)
        if key not in self._grids:
            n = node.generation
            self._grids[key] = LabelGrid(cube, self.params.a(n), self.params.s(n))
        return self._grids[key]

    def min_side(self, node: CuboidNode) -> Fraction:
        return node.base.side / 2 ** self.params.whitney_depth

    def cell_eval(self, node: CuboidNode, x) -> CellResult:
        """
        在一个长方体内解析一代

        Returns:
            CellResult: 精确值, 或者 child 为核心长方体 (需要继续下降)
        """
        x = self._point(x)
        K = node.base
        n = node.generation
        plane = node.plane
        if not K.contains(x):
            raise DomainError(f"点 {format_point(x)} 不在 P_x(Q) 内")
        if K.on_boundary(x):
            value = plane.value(x[0])
            return CellResult(value, value, n, cause="boundary", region="boundary")

        # 完整的Whitney族覆盖 K 的内部
        wc = locate_whitney_cube(K, x)
        cube = wc.cube
        if cube.on_boundary(x):
            value = plane.value(x[0])
            return CellResult(value, value, n, cause="whitney_boundary", region="whitney_boundary")

        grid = self.grid(node, cube)
        rj = child_cuboid(node, cube)
        eta = rj.h / grid.N
        index, inside = grid.locate(x)
        if index is None or not inside:
            value = self._strip_value(node, grid, rj, eta, x)
            return CellResult(value, value, n, cause="strip", region="strip")

        a = self.params.a(n)
        omega = grid.label(index)
        w = rj.z0 + omega * eta
        labeled = grid.cube(index)
        c = labeled.side
        slope = eta / c
        zig = w + eta * self.params.profile.value((x[0] - labeled.corner[0]) / c)
        band = a * c / 6
        d = labeled.boundary_gap(x)
        if d <= band:
            t = 1 - d / band
            plane_s = w + slope * (x[0] - labeled.corner[0])
            value = t * plane_s + (1 - t) * zig
            return CellResult(value, value, n, cause="cap", region="outer_ramp")
        if d <= 2 * band:
            return CellResult(zig, zig, n, cause="cap", region="zigzag")

        core = labeled.concentric(1 - a)
        J = core_interval(w, eta, a)
        if d <= 3 * band:
            u = (d - 2 * band) / band
            plane_j = J.lo + slope * (x[0] - core.corner[0])
            value = (1 - u) * zig + u * plane_j
            return CellResult(value, value, n, cause="cap", region="inner_ramp")

        child = CuboidNode(Box(core, J), n + 1, "core")
        return CellResult(J.lo, J.hi, n + 1, cause="core", child=child, region="core")

    def _strip_value(self, node: CuboidNode, grid: LabelGrid, rj: CuboidNode, eta: Fraction, x) -> Fraction:
        cube = grid.parent
        cells = [grid.axis_cell(axis, p) for axis, p in enumerate(x)]
        lower = tuple(c[0] for c in cells)
        upper = tuple(c[1] for c in cells)

        def vertex_value(vertex):
            if any(v in (c, c + cube.side) for v, c in zip(vertex, cube.corner)):
                return node.plane.value(vertex[0])
            index = tuple(grid.face_index(axis, v) for axis, v in enumerate(vertex))
            if None in index:
                raise ConstructionError(f"窄条单元顶点 {format_point(vertex)} 不是标记立方体的角点")
            labeled = grid.cube(index)
            w = rj.z0 + grid.label(index) * eta
            return w + eta / labeled.side * (vertex[0] - labeled.corner[0])

        return kuhn_interpolate(lower, upper, x, vertex_value)

    def evaluate(self, x, eps, start: Optional[CuboidNode] = None) -> EvalResult:
        """
        沿长方体链下降求值

        Args:
            x: [0,1]^m 中的有理点
            eps: 区间宽度上界
            start: 起始长方体 (默认为根)

        Returns:
            EvalResult: 宽度 ≤ eps 的区间, 到达 depth_cap 时标记 partial
        """
        x = self._point(x)
        eps = parse_scalar(eps)
        if eps <= 0:
            raise ParameterError(f"eps 必须为正: {eps}", constraint="eps > 0")
        if not self.domain.contains(x):
            raise DomainError(f"点 {format_point(x)} 不在 [0,1]^{self.dim} 内")

        node = start or root_cuboid(self.dim)
        while True:
            n = node.generation
            if not node.base.on_boundary(x):
                if node.h <= eps:
                    return EvalResult(node.z0, node.z0 + node.h, n, cause="resolved")
                if n >= self.params.depth_cap:
                    return EvalResult(node.z0, node.z0 + node.h, n, partial=True, cause="depth_cap")
            result = self.cell_eval(node, x)
            if result.child is None:
                return EvalResult(result.lo, result.hi, result.generation, cause=result.region)
            node = result.child

    def range_bracket(self, region: Cube, eps) -> Interval:
        """
        立方体上 f 取值范围的可信包围

        区间留在同一个核心内时继续下降; 否则用 Whitney 界 D(x_1) ± α·dist/√m.
        """
        eps = parse_scalar(eps)
        lo = tuple(max(c, Fraction(0)) for c in region.corner)
        hi = tuple(min(c + region.side, Fraction(1)) for c in region.corner)
        if any(l > h for l, h in zip(lo, hi)):
            raise DomainError("区域与定义域不相交")
        result = self._range(root_cuboid(self.dim), lo, hi, eps)
        return Interval(result[0], result[1])

    def _range(self, node: CuboidNode, lo, hi, eps) -> Tuple[Fraction, Fraction]:
        z_lo, z_hi = node.z0, node.z0 + node.h
        if lo == hi:
            value = self.evaluate(lo, eps, start=node)
            return value.lo, value.hi
        if node.h <= eps or node.generation >= self.params.depth_cap:
            return z_lo, z_hi

        K = node.base
        if K.interior_contains(lo) and K.interior_contains(hi):
            wc_lo = locate_whitney_cube(K, lo)
            if wc_lo == locate_whitney_cube(K, hi):
                cube = wc_lo.cube
                rj = child_cuboid(node, cube)
                grid = self.grid(node, cube)
                index_lo, in_lo = grid.locate(lo)
                index_hi, in_hi = grid.locate(hi)
                if index_lo is not None and index_lo == index_hi and in_lo and in_hi:
                    a = self.params.a(node.generation)
                    eta = rj.h / grid.N
                    w = rj.z0 + grid.label(index_lo) * eta
                    core = grid.cube(index_lo).concentric(1 - a)
                    if core.interior_contains(lo) and core.interior_contains(hi):
                        child = CuboidNode(Box(core, core_interval(w, eta, a)), node.generation + 1, "core")
                        return self._range(child, lo, hi, eps)
                    return w, w + eta
                return rj.z0, rj.z0 + rj.h

        # 每点的Whitney立方体边长不超过它到 ∂K 的距离除以 √m
        gap = min(max(h - c, c + K.side - l) for l, h, c in zip(lo, hi, K.corner))
        spread = node.alpha * gap * ceil_sqrt(self.dim) / self.dim
        plane = node.plane
        return max(z_lo, plane.value(lo[0]) - spread), min(z_hi, plane.value(hi[0]) + spread)

    def _admissible(self, node: CuboidNode, wc: WhitneyCube, z: Fraction, cert: ChainCertificate):
        rj = child_cuboid(node, wc.cube)
        if not rj.z0 < z < rj.z0 + rj.h:
            return None
        grid = self.grid(node, wc.cube)
        eta = rj.h / grid.N
        position = (z - rj.z0) / eta
        omega = position.numerator // position.denominator
        fraction = position - omega
        if fraction == 0:
            if "ambiguous" not in cert.flags:
                cert.flags.append("ambiguous")
            return None
        a = self.params.a(node.generation)
        if not a / 2 < fraction < 1 - a / 2:
            return None
        return grid, rj, eta, omega

    def _choose_cube(self, node: CuboidNode, z: Fraction, cert: ChainCertificate):
        """
        先在截断族中按顺序找, 找不到再沿 P_z(R_j) ∋ z 的竖条往更深的层找

        核心区间包含 z 的立方体, 其第一坐标范围必须严格包含 D(x_1) = z 的 x_1*.
        x_1* 是某层的二进分点, 或 z 落在标签区间端点上时, z 是面值, 记为 exceptional.
        """
        n = cert.depth
        for wc in iter_whitney_cubes(node.base, self.min_side(node)):
            found = self._admissible(node, wc, z, cert)
            if found is not None:
                return wc, found

        K = node.base
        x1 = K.corner[0] + (z - node.z0) / node.plane.slope
        if not K.corner[0] < x1 < K.corner[0] + K.side:
            cert.flags.append("exceptional")
            cert.notes.append(f"第 {n} 代 z 是长方体的底面或顶面值")
            return None
        if "ambiguous" not in cert.flags:
            first = self.params.whitney_depth + 1
            for level in range(first, first + self.params.search_levels):
                cubes = slab_whitney_cubes(K, x1, level)
                if cubes is None or "ambiguous" in cert.flags:
                    break
                for wc in cubes:
                    found = self._admissible(node, wc, z, cert)
                    if found is not None:
                        logger.debug(f"第 {n} 代在截断层之下的第 {level} 层找到立方体")
                        return wc, found
            else:
                cert.flags.append("truncated")
                cert.notes.append(
                    f"第 {n} 代在 {self.params.search_levels} 层附加搜索内没有找到核心区间包含 z 的立方体"
                )
                return None
        cert.flags.append("exceptional")
        cert.notes.append(f"第 {n} 代 z 落在Whitney立方体的面值或标签区间端点上")
        return None

    def find_level_point(self, z, depth: int) -> Tuple[Cube, ChainCertificate]:
        """
        沿标签链下降, 找到水平集 F_z 中一点的嵌套包围

        Args:
            z: (0,1) 中的水平
            depth: 链的代数

        Returns:
            (P_x(Q_depth), ChainCertificate)
        """
        z = parse_scalar(z)
        if not 0 <= z <= 1:
            raise DomainError(f"水平 z={z} 不在 [0,1] 内")
        if depth < 1:
            raise ParameterError(f"depth 必须 ≥ 1, 当前为 {depth}", constraint="depth ≥ 1")

        node = root_cuboid(self.dim)
        cert = ChainCertificate(level=z, m=self.dim, nodes=[node])
        if z in (0, 1):
            cert.flags.append("exceptional")
            cert.notes.append(f"z={format_scalar(z)} 是根长方体的底面或顶面值")
            return node.base, cert

        for n in range(depth):
            if n >= self.params.depth_cap:
                cert.notes.append(f"到达 depth_cap={self.params.depth_cap}")
                break
            chosen = self._choose_cube(node, z, cert)
            if chosen is None:
                break

            wc, (grid, rj, eta, omega) = chosen
            a = self.params.a(n)
            labeled = grid.cube(grid.digits(omega))
            w = rj.z0 + omega * eta
            child = CuboidNode(Box(labeled.concentric(1 - a), core_interval(w, eta, a)), n + 1, "core")
            cert.whitney.append(wc)
            cert.labels.append(omega)
            cert.labeled_cubes.append(labeled)
            cert.grids.append(grid)
            cert.etas.append(eta)
            cert.a_values.append(a)
            cert.nodes.append(child)
            node = child

        self._verify(cert)
        logger.info(f"z={format_scalar(z)} 的链长度 {cert.depth}, 标志 {cert.flags or '无'}")
        return cert.nodes[-1].base, cert

    def _verify(self, cert: ChainCertificate):
        """在链的中心点和 Q_{n+1} 的所有角点处精确检查 P_x(Q_{n+1}) ⊆ B(x,r_n) ⊆ B(x,2r_n) ⊆ P_x(Q_n)"""
        x_hat = cert.point
        cert.verified = []
        for n in range(cert.depth):
            outer = cert.nodes[n].base
            inner = cert.nodes[n + 1].base
            r_sq = cert.radius_sq(n)
            ok = True
            for center in [x_hat] + list(inner.vertices()):
                if not cube_in_ball(inner, center, r_sq):
                    ok = False
                if not ball_in_cube(center, 4 * r_sq, outer, squared=True):
                    ok = False
            cert.verified.append(ok)

    def level_set_sample(
        self,
        z,
        grid_n: int,
        tol,
        window: Optional[Cube] = None,
        min_generation: int = 0,
        start: Optional[CuboidNode] = None,
        eps=None,
    ) -> List[Tuple[Fraction, ...]]:
        """
        网格上的水平集近似

        Args:
            z: 水平
            grid_n: 每轴网格点数 (≥ 2)
            tol: 容差
            window: 采样窗口 (默认为起始长方体的底面)
            min_generation: > 0 时只保留下降到该代且高度范围与 [z-tol, z+tol] 相交的点 (F_z 的代理)
            start: 起始长方体

        Returns:
            List[point]: 满足条件的网格点
        """
        z = parse_scalar(z)
        tol = parse_scalar(tol)
        if grid_n < 2:
            raise ParameterError(f"grid_n 必须 ≥ 2, 当前为 {grid_n}", constraint="grid_n ≥ 2")
        if tol < 0:
            raise ParameterError(f"tol 不能为负: {tol}", constraint="tol ≥ 0")
        start = start or root_cuboid(self.dim)
        window = window or start.base
        eps = parse_scalar(eps) if eps is not None else max(tol, Fraction(1, 2 ** 30))
        target = Interval(z - tol, z + tol)

        points = []
        steps = [Fraction(i, grid_n - 1) for i in range(grid_n)]
        for offsets in itertools.product(steps, repeat=self.dim):
            x = tuple(c + window.side * o for c, o in zip(window.corner, offsets))
            if not start.base.contains(x):
                continue
            if self.in_level_proxy(start, x, target, eps, min_generation):
                points.append(x)
        logger.debug(f"z={format_scalar(z)} 的水平集样本: {len(points)} 个点")
        return points

    def in_level_proxy(self, node: CuboidNode, x, target: Interval, eps: Fraction, min_generation: int = 0) -> bool:
        """
        x 是否属于水平集样本

        min_generation > 0 时要求下降到该代且长方体高度范围与 target 相交;
        否则要求求值区间与 target 相交.
        """
        while True:
            if not target.intersects(node.box.height):
                return False
            if min_generation and node.generation >= min_generation:
                return True
            if not min_generation and (node.h <= eps or node.generation >= self.params.depth_cap):
                return True
            if min_generation and node.generation >= self.params.depth_cap:
                return False
            result = self.cell_eval(node, x)
            if result.child is None:
                return not min_generation and target.intersects(Interval(result.lo, result.hi))
            node = result.child


def cell_eval(params: MdParams, q: CuboidNode, x, eps=None) -> CellResult:
    """在长方体 q 内解析一代"""
    return MdFunction(params).cell_eval(q, x)


def eval_md(params: MdParams, x, eps) -> EvalResult:
    return MdFunction(params).evaluate(x, eps)


def find_level_point(params: MdParams, z, depth: int) -> Tuple[Cube, ChainCertificate]:
    return MdFunction(params).find_level_point(z, depth)


def level_set_sample(params: MdParams, z, grid_n: int, tol, **kwargs) -> List[Tuple[Fraction, ...]]:
    return MdFunction(params).level_set_sample(z, grid_n, tol, **kwargs)
