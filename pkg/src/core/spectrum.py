# -*- coding: utf-8 -*-
"""
频率积分观测量
粒子数 N_ω、辐射能量、单位时间产生率、探测器响应
"""

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..models.mirror import Field, MirrorKind
from ..models.results import Method, Observable, SpectrumTable
from ..models.trajectory import CollapseTrajectory
from .errors import DivergenceWarning, DomainError, QuadratureError, RegimeWarning, warning_text
from .fermion_mirror import (beta_rl_semi_fermion_numeric, beta_rr_perfect_fermion_numeric,
                             beta_rr_semi_fermion_numeric)
from .quadrature import QuadratureConfig, integrate, integrate_tail
from .scalar_mirror import (beta_rl_semi_numeric, beta_rr_perfect_numeric,
                            beta_rr_semi_numeric)
from .specfun import fermi_factor, planck_factor

logger = logging.getLogger(__name__)

# (场, 镜面) -> |β|² 中的热分布因子；标量与 Dirac 互换 Bose/Fermi
THERMAL_FACTORS: Dict[tuple, Callable] = {
    (Field.SCALAR, MirrorKind.PERFECT): planck_factor,
    (Field.SCALAR, MirrorKind.SEMI): fermi_factor,
    (Field.DIRAC, MirrorKind.PERFECT): fermi_factor,
    (Field.DIRAC, MirrorKind.SEMI): planck_factor,
}

IR_SPLIT_K_LIMIT = 0.1
RL_SHORTCUT_RATIO = 1e-3
# 半透明镜 N_ω 数值积分在 ω' = TAIL_FACTOR·max(k, α, ω) 之后改用 (α/ω')² 尾部
TAIL_FACTOR = 20.0
# 理想镜 N_ω 数值积分的 ω'/k 上限，之后用窗口内的渐近 |β|²
PERFECT_CEILING = 1e4


def thermal_factor(field_kind: Field, mirror: MirrorKind, omega: float, k: float) -> float:
    return THERMAL_FACTORS[(Field(field_kind), MirrorKind(mirror))](omega / k)


def statistics_factor(beta_sq: float, omega: float, omega_prime: float, k: float,
                      alpha: Optional[float], field_kind: Field, mirror: MirrorKind) -> float:
    """把 |β|² 除以前置因子，得到它对应的热分布因子

    理想镜面前置因子为 1/(2πω'k)，半透明镜面为 (α/ω')²/(2πωk)。
    """
    mirror = MirrorKind(mirror)
    if mirror is MirrorKind.PERFECT:
        return beta_sq * 2.0 * math.pi * omega_prime * k
    if not alpha:
        raise DomainError("半透明镜面的统计因子需要 α > 0")
    return beta_sq * 2.0 * math.pi * omega * k / (alpha / omega_prime) ** 2


def _warn(category, message: str, detail: Optional[str] = None):
    warnings.warn(f"{message} ({detail})" if detail else message, category, stacklevel=3)


# ---------- 渐近公式 ----------

def perfect_number_asymptotic(omega: float, k: float, u0: float, field_kind: Field = Field.SCALAR) -> float:
    """理想镜面 N_ω ≅ (u0/2π)·(Bose/Fermi 因子)，随 u0 线性增长"""
    if not omega > 0:
        raise DomainError(f"ω 必须为正: {omega}")
    if math.isinf(u0):
        raise DomainError("理想镜面的 N_ω 在永久坍缩下发散")
    _warn(DivergenceWarning, "理想镜面 N_ω 随 u0 增长", f"u0={u0:g}")
    return u0 / (2.0 * math.pi) * thermal_factor(field_kind, MirrorKind.PERFECT, omega, k)


def semi_number_asymptotic(omega: float, k: float, alpha: float, field_kind: Field = Field.SCALAR,
                           ir_limit: float = IR_SPLIT_K_LIMIT) -> float:
    """半透明镜 N_ω ≅ (1/2πω)(α/k)²·(Fermi/Bose 因子)"""
    if not omega > 0:
        raise DomainError(f"ω 必须为正: {omega}")
    if k >= ir_limit:
        _warn(RegimeWarning, "红外分割假定 k ≪ 1", f"k={k:g}")
    if alpha == 0:
        return 0.0
    return (alpha / k) ** 2 / (2.0 * math.pi * omega) * thermal_factor(field_kind, MirrorKind.SEMI, omega, k)


# ---------- 数值 N_ω ----------

def _semi_channels(field_kind: Field):
    if Field(field_kind) is Field.SCALAR:
        return beta_rr_semi_numeric, beta_rl_semi_numeric
    return beta_rr_semi_fermion_numeric, beta_rl_semi_fermion_numeric


def semi_number_split(omega: float, field_kind: Field, traj: CollapseTrajectory, alpha: float,
                      cfg: QuadratureConfig, rl_ratio: float = RL_SHORTCUT_RATIO,
                      tail_factor: float = TAIL_FACTOR) -> Tuple[float, float]:
    """半透明镜 N_ω 的两部分：[0,k) 红外段与 [k,∞) 段"""
    k = traj.k
    rr, rl = _semi_channels(field_kind)
    n_asym = (alpha / k) ** 2 / (2.0 * math.pi * omega) * thermal_factor(field_kind, MirrorKind.SEMI, omega, k)
    cfg_n = cfg.with_(rel_tol=max(cfg.rel_tol, 1e-6), abs_tol=max(cfg.abs_tol, 1e-8 * n_asym),
                      oscillation_rate=None)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        rr_probe = rr(traj, alpha, omega, 2.0 * k, cfg).modulus_sq
        rl_probe = rl(traj, alpha, omega, 2.0 * k, cfg).modulus_sq
        include_rl = rr_probe == 0 or rl_probe / rr_probe >= rl_ratio
        logger.info("[Spectrum] ω'=2k 处 |β^RL|²/|β^RR|² = %.3e，%s RL 通道",
                    rl_probe / rr_probe if rr_probe else math.inf, "计入" if include_rl else "忽略")

        def density(wp: float) -> float:
            value = rr(traj, alpha, omega, wp, cfg).modulus_sq
            if include_rl:
                value += rl(traj, alpha, omega, wp, cfg).modulus_sq
            return value

        def g(arr):
            return np.array([density(float(w)) for w in np.ravel(arr)]).reshape(np.shape(arr))

        low = integrate(g, 0.0, k, cfg_n)
        cut = tail_factor * max(k, alpha, omega)
        factor = thermal_factor(field_kind, MirrorKind.SEMI, omega, k)
        high = integrate_tail(g, k, cfg_n, decay="power", cut=cut,
                              tail=lambda x: alpha ** 2 * factor / (2.0 * math.pi * k * omega * x))
    for name, part in (("[0,k)", low), ("[k,∞)", high)):
        if not part.converged:
            raise QuadratureError(f"N_ω 的 {name} 段未收敛 (err={part.err_estimate:.3e})")
    logger.debug("[Spectrum] N_ω 数值：[0,k) %.6e + [k,∞) %.6e", low.value.real, high.value.real)
    return float(low.value.real), float(high.value.real)


def _perfect_number_numeric(omega: float, field_kind: Field, traj: CollapseTrajectory,
                            cfg: QuadratureConfig, ceiling: float) -> float:
    """∫_k^∞ |β|² dω'：ω'/k <= ceiling 数值积分（对数变量），其后按窗口渐近式"""
    if traj.is_eternal:
        raise DomainError("理想镜面的 N_ω 在永久坍缩下发散")
    k = traj.k
    beta = beta_rr_perfect_numeric if Field(field_kind) is Field.SCALAR else beta_rr_perfect_fermion_numeric
    window_log = k * traj.u0
    top_log = min(math.log(ceiling), window_log + math.log(100.0))
    cfg_n = cfg.with_(rel_tol=max(cfg.rel_tol, 1e-6), oscillation_rate=None)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)

        def g(y):
            out = []
            for yy in np.ravel(y):
                wp = k * math.exp(yy)
                out.append(beta(traj, omega, wp, cfg).modulus_sq * wp)
            return np.array(out).reshape(np.shape(y))

        body = integrate(g, 0.0, top_log, cfg_n.with_(abs_tol=max(cfg.abs_tol, 1e-12)))
    value = float(body.value.real)
    if window_log > top_log:
        factor = thermal_factor(field_kind, MirrorKind.PERFECT, omega, k)
        value += factor / (2.0 * math.pi * k) * (window_log - top_log)
    return value


def particle_number(omega: float, field_kind: Field, traj: CollapseTrajectory,
                    alpha: Optional[float], cfg: Optional[QuadratureConfig] = None,
                    method: Method = Method.ASYMPTOTIC, ir_limit: float = IR_SPLIT_K_LIMIT,
                    rl_ratio: float = RL_SHORTCUT_RATIO, tail_factor: float = TAIL_FACTOR,
                    perfect_ceiling: float = PERFECT_CEILING) -> float:
    """N_ω = ∫_0^∞ dω' (|β^{RR}|² + |β^{RL}|²)

    alpha=None 表示理想镜面：结果随 u0 增长，按给定 u0 计算并发出 DivergenceWarning。
    """
    if not omega > 0:
        raise DomainError(f"ω 必须为正: {omega}")
    method = Method(method)
    cfg = cfg or QuadratureConfig()
    if alpha is None:
        if method is Method.ASYMPTOTIC:
            return perfect_number_asymptotic(omega, traj.k, traj.u0, field_kind)
        _warn(DivergenceWarning, "理想镜面 N_ω 随 u0 增长", f"u0={traj.u0:g}")
        return _perfect_number_numeric(omega, field_kind, traj, cfg, perfect_ceiling)
    if alpha < 0:
        raise DomainError(f"α 必须非负: {alpha}")
    if method is Method.ASYMPTOTIC:
        return semi_number_asymptotic(omega, traj.k, alpha, field_kind, ir_limit)
    if alpha == 0:
        return 0.0
    return sum(semi_number_split(omega, field_kind, traj, alpha, cfg, rl_ratio, tail_factor))


# ---------- 能量与速率 ----------

def radiated_energy(traj: CollapseTrajectory, alpha: float, field_kind: Field = Field.SCALAR,
                    cfg: Optional[QuadratureConfig] = None, method: Method = Method.ASYMPTOTIC) -> float:
    """E = ∫ ω N_ω dω（ℏ = 1），只有标量半透明镜面有闭式 α² ln2 / (4π² k)"""
    if Field(field_kind) is not Field.SCALAR:
        raise DomainError("辐射能量只对标量场给出")
    if alpha is None or alpha < 0:
        raise DomainError("辐射能量需要半透明镜面 (α >= 0)")
    k = traj.k
    if alpha == 0:
        return 0.0
    if Method(method) is Method.ASYMPTOTIC:
        return alpha ** 2 * math.log(2.0) / (4.0 * math.pi ** 2 * k)

    cfg = cfg or QuadratureConfig()
    pref = (alpha / k) ** 2 / (2.0 * math.pi)

    def g(w):
        # ω·N_ω 的渐近形式，ω → 0 处有限
        return pref * fermi_factor(w / k)
    res = integrate_tail(g, 0.0, cfg, decay="exp", rate=2.0 * math.pi / k)
    return float(res.value.real)


def rate_per_unit_time(omega: float, k: float) -> float:
    """lim N_ω / t0 = (1/π)(e^{2πω/k} - 1)^{-1}，t0 ≅ u0/2"""
    if not omega > 0:
        raise DomainError(f"ω 必须为正: {omega}")
    return planck_factor(omega / k) / math.pi


def detector_response(omega: float, field_kind: Field, traj: CollapseTrajectory,
                      alpha: Optional[float], cfg: Optional[QuadratureConfig] = None,
                      method: Method = Method.ASYMPTOTIC, **number_options) -> float:
    """惯性探测器响应 F(ω) = π N_ω / ω"""
    if alpha is None:
        _warn(DivergenceWarning, "理想镜面的探测器响应发散")
    value = math.pi * particle_number(omega, field_kind, traj, alpha, cfg, method, **number_options) / omega
    if Method(method) is Method.ASYMPTOTIC and alpha is not None and Field(field_kind) is Field.SCALAR:
        printed = (alpha / traj.k) ** 2 * fermi_factor(omega / traj.k) / (2.0 * omega ** 2)
        assert math.isclose(value, printed, rel_tol=1e-12, abs_tol=1e-300)
    return value


def detector_response_rate(omega: float, k: float) -> float:
    """永久加速情形的单位时间响应 P(ω) = (1/ω)(e^{2πω/k} - 1)^{-1}"""
    if not omega > 0:
        raise DomainError(f"ω 必须为正: {omega}")
    return planck_factor(omega / k) / omega


# ---------- 谱表 ----------

def _collect(fn: Callable[[float], float], omega_grid: Sequence[float]):
    values, notes = [], []
    for w in omega_grid:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            values.append(fn(float(w)))
        for item in caught:
            text = warning_text(item.category, str(item.message))
            if text not in notes:
                notes.append(text)
    return values, notes


def number_spectrum(omega_grid: Sequence[float], field_kind: Field, traj: CollapseTrajectory,
                    alpha: Optional[float], cfg: Optional[QuadratureConfig] = None,
                    method: Method = Method.ASYMPTOTIC, **number_options) -> SpectrumTable:
    """在 ω 网格上计算 N_ω"""
    values, notes = _collect(
        lambda w: particle_number(w, field_kind, traj, alpha, cfg, method, **number_options), omega_grid)
    params = {"k": traj.k, "u0": None if traj.is_eternal else traj.u0, "alpha": alpha}
    return SpectrumTable(np.asarray(omega_grid), np.asarray(values), Observable.N_OMEGA, params,
                         Field(field_kind), Method(method), notes)


def detector_spectrum(omega_grid: Sequence[float], field_kind: Field, traj: CollapseTrajectory,
                      alpha: Optional[float], cfg: Optional[QuadratureConfig] = None,
                      method: Method = Method.ASYMPTOTIC, **number_options) -> SpectrumTable:
    """在 ω 网格上计算 F(ω)"""
    values, notes = _collect(
        lambda w: detector_response(w, field_kind, traj, alpha, cfg, method, **number_options), omega_grid)
    params = {"k": traj.k, "u0": None if traj.is_eternal else traj.u0, "alpha": alpha}
    return SpectrumTable(np.asarray(omega_grid), np.asarray(values), Observable.RESPONSE_F, params,
                         Field(field_kind), Method(method), notes)


def rate_spectrum(omega_grid: Sequence[float], k: float) -> SpectrumTable:
    """P(ω) 闭式谱"""
    values = [detector_response_rate(float(w), k) for w in omega_grid]
    return SpectrumTable(np.asarray(omega_grid), np.asarray(values), Observable.RESPONSE_P,
                         {"k": k, "u0": None, "alpha": None}, Field.SCALAR, Method.ASYMPTOTIC, [])


# ---------- 增长律 ----------

@dataclass
class GrowthProbe:
    """理想镜面 N_ω 随 u0 的增长律测量"""
    omega: float
    k: float
    u0_values: List[float]
    numbers: List[float]
    linear_slope: float
    linear_residual: float
    log_residual: float
    rate_closed_form: float
    warnings: List[str] = field(default_factory=list)

    @property
    def per_unit_time(self) -> List[float]:
        return [n / (0.5 * u0) for n, u0 in zip(self.numbers, self.u0_values)]

    @property
    def preferred_law(self) -> str:
        return "linear" if self.linear_residual <= self.log_residual else "logarithmic"

    def rows(self) -> List[Dict]:
        return [{"u0": u0, "n_numeric": n, "n_per_unit_time": r, "rate_closed_form": self.rate_closed_form}
                for u0, n, r in zip(self.u0_values, self.numbers, self.per_unit_time)]


def _fit_residual(x: np.ndarray, y: np.ndarray):
    coeffs = np.polyfit(x, y, 1)
    resid = y - np.polyval(coeffs, x)
    scale = max(float(np.max(np.abs(y))), 1e-300)
    return float(coeffs[0]), float(np.sqrt(np.mean(resid ** 2)) / scale)


def growth_law_probe(omega: float, k: float, u0_values: Sequence[float],
                     cfg: Optional[QuadratureConfig] = None, field_kind: Field = Field.SCALAR,
                     perfect_ceiling: float = PERFECT_CEILING) -> GrowthProbe:
    """数值计算若干 u0 下的理想镜面 N_ω，分别对 u0 和 ln u0 作线性拟合

    线性律下 N/(u0/2) 应趋于 rate_per_unit_time。
    """
    u0s = [float(u) for u in u0_values]
    if len(u0s) < 3:
        raise DomainError("增长律拟合至少需要 3 个 u0")
    if any(u <= 0 or math.isinf(u) for u in u0s):
        raise DomainError("u0 必须为正的有限数")
    numbers, notes = [], []
    for u0 in u0s:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DivergenceWarning)
            numbers.append(particle_number(omega, field_kind, CollapseTrajectory(k, u0), None, cfg,
                                           Method.NUMERIC, perfect_ceiling=perfect_ceiling))
    x, y = np.asarray(u0s), np.asarray(numbers)
    slope, lin_res = _fit_residual(x, y)
    _, log_res = _fit_residual(np.log(x), y)
    notes.append(warning_text(DivergenceWarning, "理想镜面 N_ω 随 u0 增长"))
    logger.info("[Spectrum] 增长律：线性残差 %.3e，对数残差 %.3e", lin_res, log_res)
    return GrowthProbe(omega, k, u0s, numbers, slope, lin_res, log_res,
                       thermal_factor(field_kind, MirrorKind.PERFECT, omega, k) / math.pi, notes)
