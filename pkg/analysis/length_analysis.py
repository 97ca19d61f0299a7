"""
曲线长度: 内接折线长度与数值弧长
"""

import logging
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import integrate

from errors import ParameterError

# 设置日志
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger('length_analysis')

DEFAULT_CHUNK = 1_000_000


def polyline_length(f: Callable, interval: Tuple[float, float], n_segments: int, chunk: int = DEFAULT_CHUNK) -> float:
    """
    n 等分区间上的内接折线长度

    Args:
        f: 向量化的函数 (numpy 数组 -> numpy 数组)
        interval: (a, b)
        n_segments: 等分段数 (≥ 1)
        chunk: 每批处理的段数

    Returns:
        float: 折线长度; 按细分加密时单调不减
    """
    if n_segments < 1:
        raise ParameterError(f"段数必须 ≥ 1, 当前为 {n_segments}", constraint="n_segments ≥ 1")
    a, b = float(interval[0]), float(interval[1])
    if not b > a:
        raise ParameterError(f"区间端点顺序错误: [{a}, {b}]", constraint="a < b")

    width = (b - a) / n_segments
    total = 0.0
    for start in range(0, n_segments, chunk):
        stop = min(start + chunk, n_segments)
        xs = a + width * np.arange(start, stop + 1, dtype=np.float64)
        xs[-1] = b if stop == n_segments else xs[-1]
        ys = np.asarray(f(xs), dtype=np.float64)
        total += float(np.sum(np.hypot(np.diff(xs), np.diff(ys))))
    logger.debug(f"折线长度: {n_segments} 段, 长度 {total:.6f}")
    return total


def arc_length(f_prime: Callable, interval: Tuple[float, float], limit: int = 2000, points: Optional[list] = None) -> float:
    """
    数值弧长 ∫ sqrt(1 + f'(x)²) dx

    Args:
        f_prime: 导函数
        interval: (a, b)
        limit: 自适应积分的最大子区间数
        points: 被积函数的已知转折点
    """
    a, b = float(interval[0]), float(interval[1])
    value, error = integrate.quad(lambda x: np.sqrt(1.0 + f_prime(x) ** 2), a, b, limit=limit, points=points)
    logger.debug(f"数值弧长 {value:.6f} (误差估计 {error:.2e})")
    return value
