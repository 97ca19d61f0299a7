"""
乘积提升: g(z, x) = (z, f(x)), 把 [0,1]^m → [0,1] 的例子提升到 [0,1]^{ell+m} → [0,1]^{ell+1}
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from errors import DimensionError, ParameterError
from geometry.exactgeom import Interval, parse_scalar, unit_cube


@dataclass(frozen=True)
class LiftedValue:
    prefix: tuple
    value: object

    @property
    def lo(self):
        return self.value.lo

    @property
    def hi(self):
        return self.value.hi


class ProductLift:
    """前 ell 个坐标原样输出, 后 m 个坐标交给 f"""

    def __init__(self, f, ell: int):
        if ell < 0:
            raise ParameterError(f"ell 不能为负: {ell}", constraint="ell ≥ 0")
        self.f = f
        self.ell = ell
        self.dim_in = ell + f.dim
        self.dim_out = ell + 1
        self.domain = unit_cube(self.dim_in)

    def split(self, point) -> Tuple[tuple, tuple]:
        point = tuple(point)
        if len(point) != self.dim_in:
            raise DimensionError(f"点的维度 {len(point)} 与输入维度 {self.dim_in} 不一致")
        return point[:self.ell], point[self.ell:]

    def evaluate(self, point, eps) -> LiftedValue:
        prefix, rest = self.split(point)
        inner = rest if self.f.dim > 1 else rest[0]
        return LiftedValue(prefix, self.f.evaluate(inner, eps))

    def level_set_sample(self, w, y, grid_n: int, tol, eps=None) -> List[tuple]:
        """
        g^{-1}(w, y) 的网格样本 = {w} × (f^{-1}(y) 的网格样本)

        Args:
            w: 前 ell 个坐标
            y: f 的水平
            grid_n: 每轴网格点数
            tol: 容差
        """
        w = tuple(w)
        if len(w) != self.ell:
            raise DimensionError(f"w 的维度 {len(w)} 与 ell={self.ell} 不一致")
        if grid_n < 2:
            raise ParameterError(f"grid_n 必须 ≥ 2, 当前为 {grid_n}", constraint="grid_n ≥ 2")
        exact = getattr(self.f, "exact", True)
        y = parse_scalar(y) if exact else float(y)
        tol = parse_scalar(tol) if exact else float(tol)
        eps = eps if eps is not None else (max(tol, Fraction(1, 2 ** 30)) if exact else 0.0)
        target = Interval(y - tol, y + tol)
        steps = [Fraction(i, grid_n - 1) if exact else i / (grid_n - 1) for i in range(grid_n)]
        points = []
        for x in itertools.product(steps, repeat=self.f.dim):
            value = self.f.evaluate(x if self.f.dim > 1 else x[0], eps)
            if value.lo <= target.hi and target.lo <= value.hi:
                points.append(w + x)
        return points


def product_lift(f, ell: int) -> ProductLift:
    return ProductLift(f, ell)
