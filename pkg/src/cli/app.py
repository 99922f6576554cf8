# -*- coding: utf-8 -*-
"""
命令行入口
解析参数、校验组合、按网格并行计算并导出结果表
"""

import argparse
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence, Tuple

from config.settings import Settings

from .. import __version__
from ..core.errors import DomainError, MirrorRadError
from ..core.export_manager import TOOL_NAME, ExportManager
from ..core.fermion_mirror import TRANS_DECAY_CHOICES
from ..utils.helpers import ensure_dir, parse_float, parse_grid
from .commands import COLUMNS, RunConfig, grid_points, probe_growth_rows, regime_tags, run_point

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3

# 各命令需要的额外参数
GRID_COMMANDS = ("beta", "spectrum")
OMEGA_COMMANDS = ("nomega", "detector", "probe-uv", "modes", "probe-growth")


def _grid(text: str) -> List[float]:
    try:
        return parse_grid(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _number(text: str) -> float:
    try:
        return parse_float(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", choices=["scalar", "dirac"], default="scalar")
    common.add_argument("--mirror", choices=["perfect", "semitransparent"], default="perfect")
    common.add_argument("--k", type=_number, default=1.0, help="表面引力 k > 0")
    common.add_argument("--u0", type=_number, default=math.inf, help="视界形成时刻，inf 为永久坍缩")
    common.add_argument("--alpha", type=_number, default=None, help="镜面耦合 α，半透明镜面必需")
    common.add_argument("--method", choices=["numeric", "asymptotic", "both"], default="both")
    common.add_argument("--rel-tol", type=_number, default=None)
    common.add_argument("--abs-tol", type=_number, default=None)
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--output", default=None, help="输出文件，缺省写到 stdout")
    common.add_argument("--jobs", type=int, default=None, help="并行进程数，0 为 CPU 数")
    common.add_argument("--stamp", action="store_true", help="JSON 元数据中写入时间戳")
    common.add_argument("--config", default=None, help="JSON 设置文件")
    common.add_argument("-v", "--verbose", action="count", default=0)
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=TOOL_NAME, description="运动镜面模型中的黑洞坍缩辐射：Bogoliubov 系数、粒子谱与探测器响应")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common_parser()

    for name, help_text in (("beta", "Bogoliubov 系数 β(ω, ω')"),
                            ("spectrum", "|β|² 与热因子")):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--omega", type=_grid, required=True)
        p.add_argument("--omega-prime", type=_grid, required=True)
        p.add_argument("--channel", choices=["rr", "rl"], default="rr")
        p.add_argument("--conjugate-product", action="store_true",
                       help="Dirac RL 通道中透射模取 ω → -ω")
        p.add_argument("--trans-decay", choices=TRANS_DECAY_CHOICES, default="printed")

    p = sub.add_parser("nomega", parents=[common], help="单频粒子数 N_ω")
    p.add_argument("--omega", type=_grid, required=True)
    p = sub.add_parser("detector", parents=[common], help="惯性探测器响应 F(ω)")
    p.add_argument("--omega", type=_grid, required=True)
    sub.add_parser("energy", parents=[common], help="辐射总能量")

    p = sub.add_parser("modes", parents=[common], help="镜面上的反射/透射模")
    p.add_argument("--omega", type=_number, required=True)
    p.add_argument("--u", type=_grid, required=True)
    p.add_argument("--paper-literal", action="store_true",
                   help="反射模指数项使用 ω/4 的字面形式")
    p.add_argument("--trans-decay", choices=TRANS_DECAY_CHOICES, default="printed")

    sub.add_parser("check-trajectory", parents=[common], help="轨迹可积性判据")

    p = sub.add_parser("probe-uv", parents=[common], help="|β|² 的紫外衰减斜率")
    p.add_argument("--omega", type=_grid, required=True)
    p.add_argument("--omega-prime", type=_grid, required=True)

    p = sub.add_parser("probe-growth", parents=[common], help="理想镜面 N_ω 随 u0 的增长律")
    p.add_argument("--omega", type=_number, required=True)
    p.add_argument("--u0-values", type=_grid, required=True)
    return parser


def _as_list(value) -> List[float]:
    if value is None:
        return []
    return list(value) if isinstance(value, (list, tuple)) else [value]


def make_config(args: argparse.Namespace, settings: Settings) -> RunConfig:
    """命令行参数优先于设置文件与环境变量"""
    jobs = args.jobs if args.jobs is not None else settings.get("jobs")
    if not jobs or jobs <= 0:
        jobs = os.cpu_count() or 1
    cfg = RunConfig(
        command=args.command,
        field=args.field,
        mirror=args.mirror,
        k=args.k,
        u0=args.u0,
        alpha=args.alpha,
        method=args.method,
        channel=getattr(args, "channel", "rr"),
        rel_tol=args.rel_tol if args.rel_tol is not None else float(settings.get("rel_tol")),
        abs_tol=args.abs_tol if args.abs_tol is not None else float(settings.get("abs_tol")),
        max_subdivisions=int(settings.get("max_subdivisions")),
        regime_ratio=float(settings.get("regime_ratio")),
        window_margin=float(settings.get("window_margin")),
        omega_prime_ceiling=float(settings.get("omega_prime_ceiling")),
        ir_split_k_limit=float(settings.get("ir_split_k_limit")),
        rl_shortcut_ratio=float(settings.get("rl_shortcut_ratio")),
        fit_residual_max=float(settings.get("fit_residual_max")),
        paper_literal=getattr(args, "paper_literal", False),
        conjugate_product=getattr(args, "conjugate_product", False),
        trans_decay=getattr(args, "trans_decay", "printed"),
        output=args.output,
        format=args.format,
        jobs=int(jobs),
        stamp=args.stamp,
    )
    if hasattr(args, "omega"):
        cfg.omega = _as_list(args.omega)
    if hasattr(args, "omega_prime"):
        cfg.omega_prime = _as_list(args.omega_prime)
    cfg.u = _as_list(getattr(args, "u", None))
    cfg.u0_values = _as_list(getattr(args, "u0_values", None))
    return cfg


def validate(cfg: RunConfig):
    """参数组合检查，不合法时抛出 DomainError（退出码 2）"""
    if not (cfg.k > 0 and math.isfinite(cfg.k)):
        raise DomainError(f"--k 必须为正的有限数: {cfg.k}")
    if cfg.u0 < 0:
        raise DomainError(f"--u0 必须非负: {cfg.u0}")
    if not (cfg.rel_tol > 0 and cfg.abs_tol > 0):
        raise DomainError("--rel-tol 与 --abs-tol 必须为正")
    semi = cfg.mirror == "semitransparent"
    if semi and cfg.alpha is None:
        raise DomainError("半透明镜面需要 --alpha")
    if not semi and cfg.alpha is not None:
        raise DomainError("--alpha 只用于 --mirror semitransparent")
    if cfg.alpha is not None and not (cfg.alpha >= 0 and math.isfinite(cfg.alpha)):
        raise DomainError(f"--alpha 必须为非负有限数: {cfg.alpha}")
    if any(not w > 0 for w in cfg.omega):
        raise DomainError("--omega 必须为正")
    if cfg.command in GRID_COMMANDS + ("probe-uv",) and any(not w > 0 for w in cfg.omega_prime):
        raise DomainError("--omega-prime 必须为正")

    command = cfg.command
    if command in GRID_COMMANDS and cfg.channel == "rl" and not semi:
        raise DomainError("理想镜面没有透射，--channel rl 需要 --mirror semitransparent")
    if command in ("nomega", "detector") and not semi and math.isinf(cfg.u0):
        raise DomainError("理想镜面的 N_ω 随 u0 发散，需要有限的 --u0")
    if command == "energy" and (not semi or cfg.field != "scalar"):
        raise DomainError("energy 只支持 --field scalar --mirror semitransparent")
    if command == "modes" and not semi:
        raise DomainError("modes 需要 --mirror semitransparent 与 --alpha")
    if command == "probe-uv":
        if math.isinf(cfg.u0):
            raise DomainError("probe-uv 需要有限的 --u0")
        if len(cfg.omega_prime) < 3:
            raise DomainError("probe-uv 至少需要 3 个 --omega-prime")
    if command == "probe-growth":
        if semi:
            raise DomainError("probe-growth 只针对理想镜面")
        if len(cfg.u0_values) < 3:
            raise DomainError("probe-growth 至少需要 3 个 --u0-values")


def run(cfg: RunConfig) -> Tuple[List[dict], List[str]]:
    """逐点计算，输出顺序与网格顺序一致"""
    if cfg.command == "probe-growth":
        return probe_growth_rows(cfg), []
    points = grid_points(cfg)
    if cfg.jobs <= 1 or len(points) <= 1:
        results = [run_point(cfg, p) for p in points]
    else:
        logger.info("[CLI] %d 个网格点，%d 个进程", len(points), cfg.jobs)
        with ProcessPoolExecutor(max_workers=min(cfg.jobs, len(points))) as pool:
            results = list(pool.map(run_point, [cfg] * len(points), points))
    rows = [row for row, _ in results]
    notes = [n for _, row_notes in results for n in row_notes]
    return rows, notes


def write_output(cfg: RunConfig, rows: List[dict], notes: Sequence[str]):
    exporter = ExportManager(cfg.command, COLUMNS[cfg.command], cfg.params(), cfg.stamp)
    meta = {}
    if cfg.format == "json":
        meta = {"warnings": notes, "regimes": regime_tags(cfg)}
    if cfg.output:
        ensure_dir(os.path.dirname(cfg.output))
        with open(cfg.output, "w", encoding="utf-8", newline="") as f:
            exporter.export(rows, cfg.format, f, **meta)
        logger.info("[CLI] 结果已写入 %s", cfg.output)
    else:
        exporter.export(rows, cfg.format, sys.stdout, **meta)


def setup_logging(verbose: int):
    level = logging.WARNING if verbose <= 0 else (logging.INFO if verbose == 1 else logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose)
    try:
        cfg = make_config(args, Settings(args.config))
        validate(cfg)
        rows, notes = run(cfg)
        write_output(cfg, rows, notes)
    except DomainError as e:
        logger.error("[CLI] %s", e)
        print(f"{TOOL_NAME}: 错误: {e}", file=sys.stderr)
        return EXIT_USAGE
    except MirrorRadError as e:
        logger.error("[CLI] 数值失败: %s", e)
        print(f"{TOOL_NAME}: 数值失败: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ArithmeticError, ValueError) as e:
        # numpy/scipy 内部的数值异常同样按数值失败退出
        logger.error("[CLI] 数值异常: %r", e)
        print(f"{TOOL_NAME}: 数值失败: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    for note in dict.fromkeys(notes):
        logger.warning("[CLI] %s", note)
    return EXIT_OK
