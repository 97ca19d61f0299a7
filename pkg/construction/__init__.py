"""
构造模块: 一维与m维的惰性迭代构造
"""

from .build1d import (
    EvalResult,
    LevelSetReport,
    OneDimFunction,
    ParamSeq,
    RectNode,
    ZigzagProfile,
    eval1d,
    level_set_1d,
)
from .buildmd import (
    ChainCertificate,
    CuboidNode,
    MdFunction,
    MdParams,
    eval_md,
    find_level_point,
    level_set_sample,
)
from .label_grid import LabelGrid

__all__ = [
    'EvalResult', 'LevelSetReport', 'OneDimFunction', 'ParamSeq', 'RectNode',
    'ZigzagProfile', 'eval1d', 'level_set_1d',
    'ChainCertificate', 'CuboidNode', 'MdFunction', 'MdParams', 'eval_md',
    'find_level_point', 'level_set_sample', 'LabelGrid',
]
