#!/usr/bin/env python
# -*- coding: utf-8 -*-

import os
import sys
import json
import logging
import argparse
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

import json5
from colorama import Fore, Style, init as colorama_init
from tqdm import tqdm

# 添加模块路径
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

# 导入配置
import config

# 导入构造模块
from construction.build1d import OneDimFunction, ParamSeq, ZigzagProfile, level_set_1d
from construction.buildmd import MdFunction, MdParams, root_cuboid
from errors import ConstructionError, ParameterError
from geometry.exactgeom import format_scalar, parse_point, parse_scalar
from geometry.whitney import iter_whitney_cubes

# 导入分析模块
from analysis.density_analysis import annulus_vacancy, density_at_certificate, density_flag
from analysis.length_analysis import arc_length, polyline_length
from analysis.oscillation_analysis import OscillationAnalysis

# 导入例子库
from gallery.cantor_example import CantorModified, cantor_gap_images
from gallery.sine_example import SineF, sine_g, sine_g_prime, sine_level_set_sample

from report import RATIONAL_FORMATS, ReportExporter

logger = logging.getLogger('main')

CONSTRUCTIONS = ("build1d", "buildmd", "cantor", "sine")


def setup_logging(log_dir: Optional[str] = None):
    """根日志: 文件 + 控制台"""
    log_dir = log_dir or config.LOG_DIR
    os.makedirs(log_dir, exist_ok=True)
    root = logging.getLogger()
    root.setLevel(getattr(logging, config.LOG_LEVEL, logging.INFO))
    if not any(isinstance(h, logging.FileHandler) for h in root.handlers):
        handler = logging.FileHandler(os.path.join(log_dir, "construction.log"), encoding="utf-8")
        handler.setFormatter(logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s'))
        root.addHandler(handler)


@dataclass
class RunConfig:
    """一次运行的完整配置; 文件中的值覆盖 config.py 的默认值"""

    construction: str = config.CONSTRUCTION
    build1d: dict = field(default_factory=lambda: json.loads(json.dumps(config.BUILD1D_CONFIG)))
    buildmd: dict = field(default_factory=lambda: json.loads(json.dumps(config.BUILDMD_CONFIG)))
    analysis: dict = field(default_factory=lambda: json.loads(json.dumps(config.ANALYSIS_CONFIG)))
    gallery: dict = field(default_factory=lambda: json.loads(json.dumps(config.GALLERY_CONFIG)))
    export: dict = field(default_factory=lambda: json.loads(json.dumps(config.EXPORT_CONFIG)))
    output_dir: str = config.OUTPUT_DIR
    seed: float = config.SAMPLING_SEED

    BLOCKS = ("build1d", "buildmd", "analysis", "gallery", "export")

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        unknown = set(data) - set(cls.BLOCKS) - {"construction", "output_dir", "seed"}
        if unknown:
            raise ParameterError(f"未知的配置项: {sorted(unknown)}", constraint="known config keys")
        run = cls()
        for block in cls.BLOCKS:
            if block in data:
                if not isinstance(data[block], dict):
                    raise ParameterError(f"配置块 {block} 必须是对象", constraint=f"{block} is object")
                getattr(run, block).update(data[block])
        if "construction" in data:
            run.construction = data["construction"]
        if "output_dir" in data:
            run.output_dir = str(data["output_dir"])
        if "seed" in data:
            run.seed = float(data["seed"])
        run.validate()
        return run

    @classmethod
    def load(cls, path: Optional[str]) -> "RunConfig":
        """读取配置文件 (允许注释与尾逗号); path 为空时使用默认值"""
        if not path:
            run = cls()
            run.validate()
            return run
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json5.load(f)
        except OSError as e:
            raise ParameterError(f"无法读取配置文件 {path}: {str(e)}", constraint="config readable")
        except ValueError as e:
            raise ParameterError(f"配置文件 {path} 不是合法的JSON: {str(e)}", constraint="config is JSON")
        if not isinstance(data, dict):
            raise ParameterError("配置文件顶层必须是对象", constraint="config is object")
        return cls.from_dict(data)

    def validate(self):
        """在加载时检查每个模块的前置条件"""
        if self.construction not in CONSTRUCTIONS:
            raise ParameterError(f"未知的构造: {self.construction}", constraint=f"construction ∈ {set(CONSTRUCTIONS)}")
        if not 0 <= self.seed < 1:
            raise ParameterError(f"seed={self.seed} 不在 [0,1) 内", constraint="0 ≤ seed < 1")
        self.params_1d()
        if int(self.build1d.get("max_k", 48)) < 1:
            raise ParameterError("max_k 必须 ≥ 1", constraint="max_k ≥ 1")
        md = self.params_md()
        for n in range(md.depth_cap):
            md.s(n)
        if int(self.gallery.get("cantor_depth", 24)) < 1:
            raise ParameterError("cantor_depth 必须 ≥ 1", constraint="cantor_depth ≥ 1")
        if self.export.get("rational_format", "fraction") not in RATIONAL_FORMATS:
            raise ParameterError(
                f"未知的有理数格式: {self.export.get('rational_format')}",
                constraint="rational_format ∈ {fraction, decimal}",
            )
        scales = self.analysis.get("scales", {})
        if int(scales.get("k_min", 1)) > int(scales.get("k_max", 16)):
            raise ParameterError("k_min 大于 k_max", constraint="k_min ≤ k_max")

    def params_1d(self):
        seq = ParamSeq.from_config(self.build1d.get("a_rule", {}), int(self.build1d.get("depth_cap", 64)))
        return seq, ZigzagProfile.from_config(self.build1d.get("profile"))

    def params_md(self) -> MdParams:
        return MdParams.from_config(self.buildmd)

    def to_dict(self) -> dict:
        return {
            "construction": self.construction,
            "build1d": self.build1d,
            "buildmd": self.buildmd,
            "analysis": self.analysis,
            "gallery": self.gallery,
            "export": self.export,
            "output_dir": self.output_dir,
            "seed": self.seed,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False, indent=2)


class ConstructionRunner:
    """把配置, 构造, 分析与导出串起来"""

    def __init__(self, run_config: RunConfig):
        """
        初始化运行器

        Args:
            run_config: 已验证的运行配置
        """
        self.config = run_config
        self.exporter = ReportExporter.from_config(run_config.export, run_config.output_dir)
        self.oscillation_analyzer = OscillationAnalysis(run_config.analysis, seed=run_config.seed)
        self.function = self._build_function()
        logger.info(f"初始化运行器完成, 构造: {run_config.construction}, 输出目录: {run_config.output_dir}")

    def _build_function(self):
        kind = self.config.construction
        if kind == "build1d":
            seq, profile = self.config.params_1d()
            return OneDimFunction(seq, profile, int(self.config.build1d.get("max_k", 48)))
        if kind == "buildmd":
            return MdFunction(self.config.params_md())
        if kind == "cantor":
            return CantorModified(int(self.config.gallery.get("cantor_depth", 24)))
        return SineF()

    def _require(self, *kinds):
        if self.config.construction not in kinds:
            raise ParameterError(
                f"该命令不适用于构造 {self.config.construction}",
                constraint=f"construction ∈ {set(kinds)}",
            )

    def _scalar(self, text):
        value = parse_scalar(text)
        return value if self.function.exact else float(value)

    def _parse_point(self, text):
        point = parse_point(text)
        if not self.function.exact:
            point = tuple(float(c) for c in point)
        return point[0] if self.function.dim == 1 and len(point) == 1 else point

    def _md_certificate(self, z, depth):
        self._require("buildmd")
        _, cert = self.function.find_level_point(z, depth)
        return cert

    def build(self, depth: int) -> str:
        """展开树并写出元数据"""
        kind = self.config.construction
        if kind == "build1d":
            rows = []
            for node in self.function.nodes(depth, max_k=min(self.function.max_k, 8)):
                rows.append({
                    "generation": node.generation,
                    "role": node.role,
                    "x0": node.x0,
                    "y0": node.y0,
                    "length": node.length,
                    "h": node.h,
                    "aspect": node.h / node.length,
                })
            return self.exporter.write_csv("build1d_tree.csv", rows)
        if kind == "buildmd":
            root = root_cuboid(self.function.dim)
            params = self.function.params
            cubes = []
            for wc in iter_whitney_cubes(root.base, self.function.min_side(root)):
                grid = self.function.grid(root, wc.cube)
                cubes.append({**wc.to_dict(), "N": grid.N, "labeled_side": grid.side, "gap": grid.gap})
            payload = {
                "params": params.to_config(),
                "root": root.to_dict(),
                "generations": [
                    {"n": n, "a": params.a(n), "s": params.s(n), "N": params.s(n) ** params.m,
                     "aspect_bound": params.seq.aspect_bound(n)}
                    for n in range(min(depth, params.depth_cap))
                ],
                "whitney": cubes,
            }
            return self.exporter.write_json("buildmd_tree.json", payload)
        if kind == "cantor":
            rows = [{"generation": n, "gap": i, "lo": iv.lo, "hi": iv.hi}
                    for n in range(1, depth + 1) for i, iv in enumerate(cantor_gap_images(n))]
            return self.exporter.write_csv("cantor_gaps.csv", rows)
        raise ParameterError("sine 例子没有可展开的树", constraint="construction ≠ sine")

    def evaluate(self, x, eps) -> dict:
        point = self._parse_point(x)
        value = self.function.evaluate(point, self._scalar(eps))
        result = {
            "x": point if isinstance(point, tuple) else [point],
            "lo": value.lo,
            "hi": value.hi,
            "partial": bool(getattr(value, "partial", False)),
            "cause": getattr(value, "cause", ""),
        }
        if result["partial"]:
            logger.warning(f"x={x} 的求值区间未达到要求精度: {result['cause']}")
        self.exporter.write_json("eval.json", result)
        return result

    def oscillation(self, x) -> dict:
        point = self._parse_point(x)
        profile = self.oscillation_analyzer.profile(self.function, point)
        self.exporter.write_csv("oscillation.csv", profile.to_frame())
        payload = profile.to_dict()
        self.exporter.write_json("oscillation.json", payload)
        return payload

    def levelset(self, y, depth: int, grid_n: int, tol) -> dict:
        kind = self.config.construction
        if kind == "build1d":
            seq, profile = self.config.params_1d()
            report = level_set_1d(seq, profile, y, depth, self.function.max_k)
            payload = report.to_dict()
            self.exporter.write_json("levelset.json", payload)
            return payload
        if kind == "cantor":
            components, unresolved = self.function.preimage_components(y, depth)
            payload = {
                "level": parse_scalar(y),
                "components": [
                    {k: (v.to_dict() if hasattr(v, "to_dict") else v) for k, v in c.items()} for c in components
                ],
                "unresolved": unresolved,
            }
            self.exporter.write_json("levelset.json", payload)
            return payload
        if kind == "buildmd":
            points = self.function.level_set_sample(y, grid_n, tol)
        else:
            points = sine_level_set_sample(self._scalar(y), grid_n, self._scalar(tol))
        self.exporter.write_csv("levelset.csv", [{"x": p[0], "y": p[1]} for p in points], columns=["x", "y"])
        return {"level": y, "count": len(points)}

    def findpoint(self, z, depth: int) -> dict:
        cert = self._md_certificate(z, depth)
        payload = cert.to_dict()
        self.exporter.write_json("certificate.json", payload)
        return payload

    def annulus(self, z, n: int, depth: int, grid_n: Optional[int], tol) -> dict:
        cert = self._md_certificate(z, depth)
        verdict = annulus_vacancy(self.function, cert, n, grid_n=grid_n, tol=tol)
        if verdict.inconclusive:
            logger.warning(f"环形检查无结论: {verdict.cause}")
        payload = verdict.to_dict()
        self.exporter.write_json("annulus.json", payload)
        return payload

    def density(self, z, n: int, depth: int, grid_n: Optional[int], tol) -> dict:
        cert = self._md_certificate(z, depth)
        verdict = annulus_vacancy(self.function, cert, n, grid_n=grid_n, tol=tol)
        payload = {"certificate_ok": cert.ok, "flags": list(cert.flags), "annulus": verdict.to_dict()}
        if cert.ok and n < cert.depth:
            report = density_at_certificate(self.function, cert, n, grid_n=grid_n, tol=tol)
            payload["density"] = report.to_dict()
            if density_flag(report) != "not_density_one":
                logger.warning(f"密度比 {report.ratio} 没有停在 2^-{report.s_exponent}")
        else:
            logger.warning(f"z={z} 没有有效的链证书, 标志: {cert.flags}")
            payload["density"] = None
        self.exporter.write_json("density.json", payload)
        return payload

    def length(self, delta, segments: Optional[int]) -> dict:
        self._require("sine")
        delta = float(parse_scalar(delta))
        segments = segments or int(self.config.gallery.get("sine_segments", 2_000_000))
        length = polyline_length(lambda t: sine_g(t) + 0.5, (delta, 1.0), segments)
        oracle = arc_length(sine_g_prime, (delta, 1.0))
        payload = {"delta": delta, "segments": segments, "polyline_length": length, "arc_length": oracle}
        self.exporter.write_json("length.json", payload)
        return payload

    def export(self, samples: Optional[int], eps) -> str:
        """图像采样点 (一维) 或网格取值 (二维)"""
        samples = samples or int(self.config.export.get("graph_samples", 1025))
        if samples < 2:
            raise ParameterError(f"采样点数必须 ≥ 2, 当前为 {samples}", constraint="samples ≥ 2")
        rows = []
        if self.function.dim == 1:
            eps = parse_scalar(eps)
            for i in tqdm(range(samples), desc="导出图像"):
                x = Fraction(i, samples - 1)
                value = self.function.evaluate(x, eps)
                rows.append({"x": x, "lo": value.lo, "hi": value.hi})
            return self.exporter.write_csv(f"{self.config.construction}_graph.csv", rows)
        exact = self.function.exact
        eps = self._scalar(eps)
        for i in tqdm(range(samples), desc="导出网格"):
            for j in range(samples):
                point = (Fraction(i, samples - 1), Fraction(j, samples - 1))
                if not exact:
                    point = tuple(float(c) for c in point)
                value = self.function.evaluate(point, eps)
                rows.append({"x": point[0], "y": point[1], "lo": value.lo, "hi": value.hi})
        return self.exporter.write_csv(f"{self.config.construction}_grid.csv", rows)


def build_parser() -> argparse.ArgumentParser:
    """命令行语法"""
    parser = argparse.ArgumentParser(description='有限下标度振荡函数的构造与诊断')
    parser.add_argument('--config', type=str, default=None, help='运行配置文件 (JSON)')
    parser.add_argument('--output-dir', type=str, default=None, help='输出目录')
    parser.add_argument('--construction', choices=CONSTRUCTIONS, default=None, help='构造类型')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('build', help='展开构造树并写出元数据')
    p.add_argument('--depth', type=int, default=2)

    p = sub.add_parser('eval', help='求值区间')
    p.add_argument('--x', required=True, help='点, 逗号分隔, 如 1/3,1/4')
    p.add_argument('--eps', default='1/1048576')

    p = sub.add_parser('oscillation', help='多尺度振荡比')
    p.add_argument('--x', required=True)

    p = sub.add_parser('levelset', help='水平集报告或网格样本')
    p.add_argument('--y', required=True)
    p.add_argument('--depth', type=int, default=3)
    p.add_argument('--grid-n', type=int, default=65)
    p.add_argument('--tol', default='0')

    p = sub.add_parser('findpoint', help='水平集点的链证书')
    p.add_argument('--z', required=True)
    p.add_argument('--depth', type=int, default=5)

    for name, help_text in (('annulus', '环形空洞检查'), ('density', '计数密度比')):
        p = sub.add_parser(name, help=help_text)
        p.add_argument('--z', required=True)
        p.add_argument('--n', type=int, default=2)
        p.add_argument('--depth', type=int, default=5)
        p.add_argument('--grid-n', type=int, default=None)
        p.add_argument('--tol', default=None)

    p = sub.add_parser('length', help='图像折线长度')
    p.add_argument('--delta', default='1/10000')
    p.add_argument('--segments', type=int, default=None)

    p = sub.add_parser('export', help='导出图像或网格取值')
    p.add_argument('--samples', type=int, default=None)
    p.add_argument('--eps', default='1/65536')
    return parser


def _print_summary(command: str, result, exporter: ReportExporter):
    """控制台摘要, 结论用颜色标出"""
    if command == 'eval':
        print(f"{format_scalar(result['lo']) if isinstance(result['lo'], Fraction) else result['lo']} "
              f"{format_scalar(result['hi']) if isinstance(result['hi'], Fraction) else result['hi']}")
    elif command in ('annulus', 'density'):
        verdict = result if command == 'annulus' else result['annulus']
        if verdict['inconclusive']:
            print(f"{Fore.YELLOW}无结论: {verdict['cause']}{Style.RESET_ALL}")
        elif verdict['vacant']:
            print(f"{Fore.GREEN}环形区域为空 (检查 {verdict['checked']} 个点){Style.RESET_ALL}")
        else:
            print(f"{Fore.RED}环形区域中有 {len(verdict['offending'])} 个点{Style.RESET_ALL}")
        if command == 'density' and result['density']:
            print(f"密度比: {result['density']['ratio']} ({result['density']['flag']})")
    elif command == 'findpoint':
        color = Fore.GREEN if all(result['verified']) and not result['flags'] else Fore.YELLOW
        print(f"{color}链长度 {len(result['verified'])}, 标志: {result['flags'] or '无'}{Style.RESET_ALL}")
    elif isinstance(result, str):
        print(f"已写入: {result}")
    else:
        print(json.dumps(exporter.format_value(result), ensure_ascii=False)[:400])


def _run(runner: ConstructionRunner, args):
    if args.command == 'build':
        return runner.build(args.depth)
    if args.command == 'eval':
        return runner.evaluate(args.x, args.eps)
    if args.command == 'oscillation':
        return runner.oscillation(args.x)
    if args.command == 'levelset':
        return runner.levelset(args.y, args.depth, args.grid_n, args.tol)
    if args.command == 'findpoint':
        return runner.findpoint(args.z, args.depth)
    if args.command == 'annulus':
        return runner.annulus(args.z, args.n, args.depth, args.grid_n, args.tol)
    if args.command == 'density':
        return runner.density(args.z, args.n, args.depth, args.grid_n, args.tol)
    if args.command == 'length':
        return runner.length(args.delta, args.segments)
    return runner.export(args.samples, args.eps)


def dispatch(argv: Optional[List[str]] = None) -> int:
    """
    执行一个子命令

    Args:
        argv: 命令行参数 (不含程序名)

    Returns:
        int: 0 成功, 1 定义域错误, 2 用法或参数错误
    """
    colorama_init()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2

    try:
        run_config = RunConfig.load(args.config)
        if args.construction:
            run_config.construction = args.construction
        if args.output_dir:
            run_config.output_dir = args.output_dir
        run_config.validate()
        setup_logging()
        runner = ConstructionRunner(run_config)
        result = _run(runner, args)
        _print_summary(args.command, result, runner.exporter)
        logger.info(f"命令 {args.command} 完成")
        return 0
    except ParameterError as e:
        logger.error(f"参数错误: {str(e)}")
        print(f"{Fore.RED}参数错误: {str(e)}{Style.RESET_ALL}", file=sys.stderr)
        return 2
    except ConstructionError as e:
        logger.error(f"执行 {args.command} 出错: {str(e)}")
        print(f"{Fore.RED}错误: {str(e)}{Style.RESET_ALL}", file=sys.stderr)
        return 1


def main():
    """主函数"""
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
