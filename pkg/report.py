#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
结果导出工具 - 把点列写成CSV, 把报告与证书写成JSON

所有文件先写到同目录下的临时文件, 再用 os.replace 替换, 不会留下写了一半的文件.
"""

import os
import sys
import json
import logging
import tempfile
from fractions import Fraction
from typing import Iterable, Optional, Union

import numpy as np
import pandas as pd

# 添加项目根目录到路径
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import config
from errors import ParameterError

logger = logging.getLogger('report')

RATIONAL_FORMATS = ("fraction", "decimal")


class ReportExporter:
    """结果导出器"""

    def __init__(self, output_dir=None, rational_format: str = "fraction", decimal_digits: int = 17):
        """
        初始化导出器

        Args:
            output_dir: 输出目录
            rational_format: "fraction" 写成 "p/q"; "decimal" 写成小数
            decimal_digits: 小数的有效位数
        """
        if rational_format not in RATIONAL_FORMATS:
            raise ParameterError(
                f"未知的有理数格式: {rational_format}",
                constraint="rational_format ∈ {fraction, decimal}",
            )
        self.output_dir = output_dir or config.OUTPUT_DIR
        self.rational_format = rational_format
        self.decimal_digits = decimal_digits

        # 确保输出目录存在
        os.makedirs(self.output_dir, exist_ok=True)

    @classmethod
    def from_config(cls, export_config: dict, output_dir=None) -> "ReportExporter":
        return cls(
            output_dir=output_dir,
            rational_format=export_config.get("rational_format", "fraction"),
            decimal_digits=int(export_config.get("decimal_digits", 17)),
        )

    def format_value(self, value):
        """单个值的文本形式; 递归处理列表和字典"""
        if isinstance(value, bool) or value is None:
            return value
        if isinstance(value, Fraction):
            if self.rational_format == "fraction":
                return f"{value.numerator}/{value.denominator}"
            return format(float(value), f".{self.decimal_digits}g")
        if isinstance(value, (np.floating, np.integer)):
            return value.item()
        if isinstance(value, dict):
            return {str(k): self.format_value(v) for k, v in value.items()}
        if isinstance(value, (list, tuple)):
            return [self.format_value(v) for v in value]
        return value

    def _path(self, name: str) -> str:
        return os.path.join(self.output_dir, name)

    def _atomic_write(self, path: str, text: str) -> str:
        directory = os.path.dirname(path) or "."
        fd, tmp_path = tempfile.mkstemp(prefix=".tmp-", dir=directory)
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
                f.write(text)
            os.replace(tmp_path, path)
        except Exception:
            if os.path.exists(tmp_path):
                os.remove(tmp_path)
            raise
        return path

    def write_csv(self, name: str, rows: Union[pd.DataFrame, Iterable[dict]], columns: Optional[list] = None) -> str:
        """
        写CSV (含表头)

        Args:
            name: 文件名
            rows: DataFrame 或字典列表
            columns: 列顺序

        Returns:
            str: 文件路径
        """
        frame = rows if isinstance(rows, pd.DataFrame) else pd.DataFrame(list(rows), columns=columns)
        frame = frame.apply(lambda col: col.map(self._cell)) if len(frame) else frame
        text = frame.to_csv(index=False, lineterminator="\n")
        path = self._atomic_write(self._path(name), text)
        logger.info(f"CSV已写入: {path} ({len(frame)} 行)")
        return path

    def _cell(self, value):
        value = self.format_value(value)
        if isinstance(value, list):
            return " ".join(str(v) for v in value)
        return value

    def write_json(self, name: str, payload) -> str:
        """写JSON, 键排序, 相同输入得到逐字节相同的文件"""
        text = json.dumps(self.format_value(payload), sort_keys=True, ensure_ascii=False, indent=2) + "\n"
        path = self._atomic_write(self._path(name), text)
        logger.info(f"JSON已写入: {path}")
        return path
