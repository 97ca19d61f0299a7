import os
from dotenv import load_dotenv

# 加载环境变量
load_dotenv()

# 系统配置
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
LOG_DIR = os.getenv("LOG_DIR", "data/logs")
OUTPUT_DIR = os.getenv("OUTPUT_DIR", "data/output")
SAMPLING_SEED = float(os.getenv("SAMPLING_SEED", 0.5))  # 拟随机序列的起点

# 默认构造
CONSTRUCTION = os.getenv("CONSTRUCTION", "build1d")

# 锯齿剖面: (顶部, 下降, 底部, 上升, 顶部) 的宽度
ZIGZAG_PROFILE = ["3/20", "3/20", "3/10", "1/5", "1/5"]

# 一维构造参数
BUILD1D_CONFIG = {
    "a_rule": {
        "kind": "dyadic",
        "offset": 3  # a_n = 2^-(n+3)
    },
    "profile": ZIGZAG_PROFILE,
    "depth_cap": 64,
    "max_k": 48  # 每个对角线的Whitney段层数
}

# m维构造参数
BUILDMD_CONFIG = {
    "m": 2,
    "a_rule": {
        "kind": "dyadic",
        "offset": 3
    },
    "s_rule": {
        "kind": "auto"
    },
    "profile": ZIGZAG_PROFILE,
    "depth_cap": 8,
    "whitney_depth": 6,  # 枚举与导出用的Whitney最小边长 = l(C)·2^-whitney_depth, 求值用完整的族
    "search_levels": 64  # 找水平集点时在 whitney_depth 之后最多再往下搜索的层数
}

# 分析参数
ANALYSIS_CONFIG = {
    "scales": {
        "k_min": 1,
        "k_max": 16
    },
    "budget": 64,  # 每个尺度的采样点数
    "cover_cells": 16,  # 每个坐标方向的覆盖格子数
    "density_exponent": None  # None 表示 m-1
}

# 例子库参数
GALLERY_CONFIG = {
    "cantor_depth": 24,
    "sine_segments": 2_000_000,
    "sine_delta": "1/10000"
}

# 导出配置
EXPORT_CONFIG = {
    "rational_format": "fraction",  # fraction: "p/q"; decimal: 小数
    "decimal_digits": 17,
    "graph_samples": 1025
}

# 确保输出目录存在
os.makedirs(OUTPUT_DIR, exist_ok=True)
os.makedirs(LOG_DIR, exist_ok=True)
