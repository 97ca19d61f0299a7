"""
拟随机 (低差异) 采样

Korobov型加法递推序列: x_i = (seed + i·α) mod 1, α 由广义黄金比例给出.
"""

import logging
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np

from errors import ParameterError
from geometry.exactgeom import Cube

# 设置日志
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger('sampling')


class QuasiRandomSequence:
    """n_dim 维拟随机序列, 取值在 [0,1)^n_dim"""

    def __init__(self, n_dim: int = 1, seed: float = 0.5):
        if n_dim < 1:
            raise ParameterError(f"维数必须 ≥ 1, 当前为 {n_dim}", constraint="n_dim ≥ 1")
        self.n_dim = n_dim
        self.seed = seed
        # 牛顿法求 x^{d+1} = x + 1 的根
        phi = 1.0
        for _ in range(20):
            phi = phi - (phi ** (n_dim + 1) - phi - 1) / ((n_dim + 1) * phi ** n_dim - 1)
        self.alpha = np.array([(1.0 / phi) ** (i + 1) % 1 for i in range(n_dim)])

    def __call__(self, n: int) -> np.ndarray:
        """前 n 个向量, 形状 (n, n_dim)"""
        steps = np.arange(1, n + 1).reshape(-1, 1)
        return (self.seed + steps * self.alpha) % 1

    def get_vector(self, n: int) -> np.ndarray:
        """第 n 个向量 (从 1 开始)"""
        return (self.seed + n * self.alpha) % 1


def ball_samples(
    center: Sequence,
    radius,
    count: int,
    domain: Cube,
    exact: bool = True,
    seed: float = 0.5,
) -> List[Tuple]:
    """
    球 B(center, radius) 与定义域交集中的拟随机点

    在外接立方体中取点, 丢弃球外和定义域外的点.

    Args:
        center: 球心
        radius: 半径
        count: 候选点个数
        domain: 定义域立方体
        exact: True 时返回 Fraction 坐标
        seed: 序列起点

    Returns:
        List[tuple]: 采样点
    """
    dim = len(center)
    sequence = QuasiRandomSequence(dim, seed)
    raw = sequence(count) * 2 - 1
    radius_f = float(radius)
    points = []
    for row in raw:
        if dim > 1 and float(np.dot(row, row)) > 1:
            continue
        if exact:
            point = tuple(c + Fraction(float(u)) * radius for c, u in zip(center, row))
            radius_sq = radius * radius
            if sum((p - c) ** 2 for p, c in zip(point, center)) > radius_sq:
                continue
        else:
            point = tuple(float(c) + float(u) * radius_f for c, u in zip(center, row))
        if domain.contains(point):
            points.append(point)
    return points
