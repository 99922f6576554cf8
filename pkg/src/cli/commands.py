# -*- coding: utf-8 -*-
"""
各子命令的列定义与逐行计算
行函数在工作进程中执行，只接收可 pickle 的 RunConfig 与网格点
"""

import cmath
import logging
import math
import warnings
from dataclasses import dataclass, field as dc_field
from typing import Callable, Dict, List, Optional, Tuple

from ..core import convergence, fermion_mirror, scalar_mirror, spectrum
from ..core.errors import warning_text
from ..core.quadrature import QuadratureConfig
from ..models.mirror import Field, MirrorKind, classify_regime
from ..models.results import Method, SpinorValue
from ..models.trajectory import CollapseTrajectory

logger = logging.getLogger(__name__)

COLUMNS: Dict[str, List[str]] = {
    "beta": ["omega", "omega_prime", "re_beta", "im_beta", "beta_sq_numeric",
             "beta_sq_asymptotic", "rel_gap", "warnings"],
    "spectrum": ["omega", "omega_prime", "beta_sq_numeric", "beta_sq_asymptotic", "rel_gap",
                 "thermal_factor", "warnings"],
    "nomega": ["omega", "n_numeric", "n_asymptotic", "rel_gap", "warnings"],
    "energy": ["alpha", "k", "energy_numeric", "energy_asymptotic", "rel_gap", "warnings"],
    "detector": ["omega", "response_numeric", "response_asymptotic", "rel_gap", "rate", "warnings"],
    "modes": ["u", "re_refl", "im_refl", "re_trans", "im_trans", "current_refl", "warnings"],
    "check-trajectory": ["b1", "b2", "integral_neg", "integral_pos", "asymptotically_inertial",
                         "condition_c", "infrared_safe", "acceleration_jumps"],
    "probe-uv": ["omega", "slope", "residual", "predicted_slope"],
    "probe-growth": ["u0", "n_numeric", "n_per_unit_time", "rate_closed_form"],
}


@dataclass
class RunConfig:
    """一次 CLI 运行的全部参数"""
    command: str
    field: str = "scalar"
    mirror: str = "perfect"
    k: float = 1.0
    u0: float = math.inf
    alpha: Optional[float] = None
    omega: List[float] = dc_field(default_factory=lambda: [1.0])
    omega_prime: List[float] = dc_field(default_factory=lambda: [100.0])
    u: List[float] = dc_field(default_factory=list)
    u0_values: List[float] = dc_field(default_factory=list)
    method: str = "both"
    channel: str = "rr"
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_subdivisions: int = 200000
    regime_ratio: float = 1e3
    window_margin: float = 10.0
    omega_prime_ceiling: float = 1e6
    ir_split_k_limit: float = 0.1
    rl_shortcut_ratio: float = 1e-3
    fit_residual_max: float = 0.25
    paper_literal: bool = False
    conjugate_product: bool = False
    trans_decay: str = "printed"
    output: Optional[str] = None
    format: str = "csv"
    jobs: int = 1
    stamp: bool = False

    @property
    def trajectory(self) -> CollapseTrajectory:
        return CollapseTrajectory(self.k, self.u0)

    @property
    def field_kind(self) -> Field:
        return Field(self.field)

    @property
    def mirror_kind(self) -> MirrorKind:
        return MirrorKind(self.mirror)

    @property
    def methods(self) -> Tuple[bool, bool]:
        """(数值, 渐近)"""
        return self.method in ("numeric", "both"), self.method in ("asymptotic", "both")

    def quadrature(self) -> QuadratureConfig:
        return QuadratureConfig(rel_tol=self.rel_tol, abs_tol=self.abs_tol,
                                max_subdivisions=self.max_subdivisions)

    def params(self) -> Dict:
        return {
            "field": self.field, "mirror": self.mirror, "k": self.k,
            "u0": None if math.isinf(self.u0) else self.u0, "alpha": self.alpha,
            "method": self.method, "channel": self.channel, "rel_tol": self.rel_tol,
            "abs_tol": self.abs_tol, "paper_literal": self.paper_literal,
            "conjugate_product": self.conjugate_product, "trans_decay": self.trans_decay,
        }


Row = Dict[str, object]


def rel_gap(numeric: Optional[float], asymptotic: Optional[float]) -> Optional[float]:
    if numeric is None or asymptotic is None or asymptotic == 0:
        return None
    return abs(numeric - asymptotic) / abs(asymptotic)


def captured(fn: Callable[[], Row]) -> Tuple[Row, List[str]]:
    """执行行函数，把警告收集为文本"""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        row = fn()
    notes = []
    for item in caught:
        text = warning_text(item.category, str(item.message))
        if text not in notes:
            notes.append(text)
    return row, notes


# ---------- β ----------

def _beta_numeric(cfg: RunConfig, omega: float, omega_prime: float):
    traj, q = cfg.trajectory, cfg.quadrature()
    margin = cfg.window_margin
    scalar = cfg.field_kind is Field.SCALAR
    if cfg.mirror_kind is MirrorKind.PERFECT:
        fn = scalar_mirror.beta_rr_perfect_numeric if scalar else fermion_mirror.beta_rr_perfect_fermion_numeric
        return fn(traj, omega, omega_prime, q, margin)
    if cfg.channel == "rl":
        if scalar:
            return scalar_mirror.beta_rl_semi_numeric(traj, cfg.alpha, omega, omega_prime, q, margin)
        return fermion_mirror.beta_rl_semi_fermion_numeric(
            traj, cfg.alpha, omega, omega_prime, q, margin,
            trans_decay=cfg.trans_decay, conjugate_product=cfg.conjugate_product)
    fn = scalar_mirror.beta_rr_semi_numeric if scalar else fermion_mirror.beta_rr_semi_fermion_numeric
    return fn(traj, cfg.alpha, omega, omega_prime, q, margin, cfg.omega_prime_ceiling)


def _beta_asymptotic(cfg: RunConfig, omega: float, omega_prime: float):
    if cfg.channel == "rl":
        return None
    scalar = cfg.field_kind is Field.SCALAR
    if cfg.mirror_kind is MirrorKind.PERFECT:
        fn = scalar_mirror.beta_rr_perfect_asymptotic if scalar else fermion_mirror.beta_rr_perfect_fermion_asymptotic
        return fn(cfg.k, omega, omega_prime, cfg.window_margin)
    fn = scalar_mirror.beta_rr_semi_asymptotic if scalar else fermion_mirror.beta_rr_semi_fermion_asymptotic
    return fn(cfg.k, cfg.alpha, omega, omega_prime, cfg.regime_ratio, cfg.window_margin)


def _beta_pair(cfg: RunConfig, omega: float, omega_prime: float):
    want_num, want_asym = cfg.methods
    num = _beta_numeric(cfg, omega, omega_prime) if want_num else None
    asym = _beta_asymptotic(cfg, omega, omega_prime) if want_asym else None
    return num, asym


def beta_row(cfg: RunConfig, point: Tuple[float, float]) -> Row:
    omega, omega_prime = point
    num, asym = _beta_pair(cfg, omega, omega_prime)
    shown = num if num is not None else asym
    sq_num = num.modulus_sq if num is not None else None
    sq_asym = asym.modulus_sq if asym is not None else None
    return {
        "omega": omega, "omega_prime": omega_prime,
        "re_beta": shown.value.real if shown is not None else None,
        "im_beta": shown.value.imag if shown is not None else None,
        "beta_sq_numeric": sq_num, "beta_sq_asymptotic": sq_asym,
        "rel_gap": rel_gap(sq_num, sq_asym),
    }


def spectrum_row(cfg: RunConfig, point: Tuple[float, float]) -> Row:
    omega, omega_prime = point
    num, asym = _beta_pair(cfg, omega, omega_prime)
    sq_num = num.modulus_sq if num is not None else None
    sq_asym = asym.modulus_sq if asym is not None else None
    measured = sq_num if sq_num is not None else sq_asym
    factor = None
    if measured is not None:
        factor = spectrum.statistics_factor(measured, omega, omega_prime, cfg.k, cfg.alpha,
                                            cfg.field_kind, cfg.mirror_kind)
    return {
        "omega": omega, "omega_prime": omega_prime,
        "beta_sq_numeric": sq_num, "beta_sq_asymptotic": sq_asym,
        "rel_gap": rel_gap(sq_num, sq_asym), "thermal_factor": factor,
    }


# ---------- 频率积分量 ----------

def _number_options(cfg: RunConfig) -> Dict:
    return {"ir_limit": cfg.ir_split_k_limit, "rl_ratio": cfg.rl_shortcut_ratio}


def nomega_row(cfg: RunConfig, omega: float) -> Row:
    want_num, want_asym = cfg.methods
    traj, alpha = cfg.trajectory, cfg.alpha
    num = spectrum.particle_number(omega, cfg.field_kind, traj, alpha, cfg.quadrature(),
                                   Method.NUMERIC, **_number_options(cfg)) if want_num else None
    asym = spectrum.particle_number(omega, cfg.field_kind, traj, alpha, cfg.quadrature(),
                                    Method.ASYMPTOTIC, **_number_options(cfg)) if want_asym else None
    return {"omega": omega, "n_numeric": num, "n_asymptotic": asym, "rel_gap": rel_gap(num, asym)}


def energy_row(cfg: RunConfig, _point=None) -> Row:
    want_num, want_asym = cfg.methods
    traj = cfg.trajectory
    num = spectrum.radiated_energy(traj, cfg.alpha, cfg.field_kind, cfg.quadrature(),
                                   Method.NUMERIC) if want_num else None
    asym = spectrum.radiated_energy(traj, cfg.alpha, cfg.field_kind, cfg.quadrature(),
                                    Method.ASYMPTOTIC) if want_asym else None
    return {"alpha": cfg.alpha, "k": cfg.k, "energy_numeric": num, "energy_asymptotic": asym,
            "rel_gap": rel_gap(num, asym)}


def detector_row(cfg: RunConfig, omega: float) -> Row:
    want_num, want_asym = cfg.methods
    traj, alpha = cfg.trajectory, cfg.alpha
    num = spectrum.detector_response(omega, cfg.field_kind, traj, alpha, cfg.quadrature(),
                                     Method.NUMERIC, **_number_options(cfg)) if want_num else None
    asym = spectrum.detector_response(omega, cfg.field_kind, traj, alpha, cfg.quadrature(),
                                      Method.ASYMPTOTIC, **_number_options(cfg)) if want_asym else None
    return {"omega": omega, "response_numeric": num, "response_asymptotic": asym,
            "rel_gap": rel_gap(num, asym), "rate": spectrum.detector_response_rate(omega, cfg.k)}


# ---------- 模函数 ----------

def modes_row(cfg: RunConfig, u: float) -> Row:
    traj, q = cfg.trajectory, cfg.quadrature()
    omega = cfg.omega[0]
    if cfg.field_kind is Field.SCALAR:
        refl = scalar_mirror.mode_refl_scalar(traj, cfg.alpha, omega, u, q, cfg.paper_literal)
        trans = scalar_mirror.mode_trans_scalar(traj, cfg.alpha, omega, u, q)
        current = None
    else:
        refl_s = fermion_mirror.mode_refl_fermion(traj, cfg.alpha, omega, u, q)
        trans_s = fermion_mirror.mode_trans_fermion(traj, cfg.alpha, omega, u, q, cfg.trans_decay)
        refl, trans = refl_s.upper, trans_s.upper
        # 镜面上的完整 in 模：下分量为入射波 e^{-iωV(u)}/√(2π)
        incident = cmath.exp(-1j * omega * float(traj.advance(u)))
        in_mode = SpinorValue(refl, incident / fermion_mirror.SQRT_2PI)
        current = fermion_mirror.dirac_current_normal(traj, in_mode, u)
    return {"u": u, "re_refl": refl.real, "im_refl": refl.imag, "re_trans": trans.real,
            "im_trans": trans.imag, "current_refl": current}


# ---------- 轨迹与探针 ----------

def check_trajectory_row(cfg: RunConfig, _point=None) -> Row:
    return convergence.classify(cfg.trajectory).to_dict()


def probe_uv_row(cfg: RunConfig, omega: float) -> Row:
    fit = convergence.uv_decay_probe(cfg.trajectory, omega, cfg.omega_prime, cfg.quadrature(),
                                     cfg.fit_residual_max)
    return fit.to_row()


def probe_growth_rows(cfg: RunConfig) -> List[Row]:
    probe = spectrum.growth_law_probe(cfg.omega[0], cfg.k, cfg.u0_values, cfg.quadrature(),
                                      cfg.field_kind)
    logger.info("[CLI] 增长律倾向 %s", probe.preferred_law)
    return probe.rows()


ROW_FUNCTIONS: Dict[str, Callable] = {
    "beta": beta_row,
    "spectrum": spectrum_row,
    "nomega": nomega_row,
    "energy": energy_row,
    "detector": detector_row,
    "modes": modes_row,
    "check-trajectory": check_trajectory_row,
    "probe-uv": probe_uv_row,
}


def grid_points(cfg: RunConfig) -> list:
    """各命令的网格点，按输出顺序"""
    if cfg.command in ("beta", "spectrum"):
        return [(w, wp) for w in cfg.omega for wp in cfg.omega_prime]
    if cfg.command in ("nomega", "detector", "probe-uv"):
        return list(cfg.omega)
    if cfg.command == "modes":
        return list(cfg.u)
    return [None]


def regime_tags(cfg: RunConfig) -> List[str]:
    """元数据中的 Regime 标签"""
    if cfg.command not in ("beta", "spectrum"):
        return []
    alpha = None if cfg.mirror_kind is MirrorKind.PERFECT else cfg.alpha
    return [classify_regime(alpha, wp, cfg.regime_ratio).value for wp in cfg.omega_prime]


def run_point(cfg: RunConfig, point) -> Tuple[Row, List[str]]:
    """工作进程入口"""
    row_fn = ROW_FUNCTIONS[cfg.command]
    row, notes = captured(lambda: row_fn(cfg, point))
    if "warnings" in COLUMNS[cfg.command]:
        row["warnings"] = notes
    return row, notes
