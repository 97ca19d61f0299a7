import os
import sys
from fractions import Fraction

import pytest

# 添加项目根目录到路径
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from analysis.sampling import QuasiRandomSequence
from construction.build1d import OneDimFunction
from construction.buildmd import MdFunction


def rational_points(count, n_dim=1, denominator=999, seed=0.5):
    """拟随机有理点, 分母为奇数 (避开二进顶点值)"""
    seq = QuasiRandomSequence(n_dim, seed)
    points = []
    for row in seq(count):
        coords = tuple(Fraction(min(max(int(v * denominator), 1), denominator - 1), denominator) for v in row)
        points.append(coords if n_dim > 1 else coords[0])
    return points


@pytest.fixture
def f1d():
    return OneDimFunction()


@pytest.fixture(scope="module")
def fmd():
    return MdFunction()


@pytest.fixture
def rational():
    return rational_points
