# -*- coding: utf-8 -*-
"""
标量场镜面
模函数与 β Bogoliubov 系数：理想镜面 / 半透明镜面，数值 / 渐近
"""

import cmath
import logging
import math
import warnings
from typing import Dict, List, Optional

import numpy as np

from ..models.mirror import Field, Regime, classify_regime, scatter
from ..models.results import BetaCoefficient, Channel, IntegralResult, Method
from ..models.trajectory import CollapseTrajectory
from .errors import DomainError, RegimeWarning, SubdivisionLimit, warning_text
from .quadrature import (QuadratureConfig, integrate, power_integral, triangle_integral,
                         triangle_power_integral)
from .specfun import (fermi_factor, gamma_abs_sq_half_plus, gamma_abs_sq_one_plus,
                      log_gamma, log_imaginary_power, planck_factor)

logger = logging.getLogger(__name__)

__all__ = [
    'scatter', 'classify_regime', 'window_notes',
    'beta_rr_perfect_numeric', 'beta_rr_perfect_asymptotic',
    'mode_refl_scalar', 'mode_trans_scalar',
    'beta_rr_semi_numeric', 'beta_rr_semi_asymptotic', 'beta_rl_semi_numeric',
]

# e^{-2αs/k} 在 s = DECAY_CUT·k/α 处已小于 e^{-80}
DECAY_CUT = 40.0
# 半透明镜数值积分允许的最大 ω'/k
OMEGA_PRIME_CEILING = 1e6
# 永久坍缩时 w = e^{-ku/2} 的截断
ETERNAL_FLOOR = 1e-12
# 嵌套积分内层的相对容差
INNER_REL_TOL = 1e-11


# ---------- 公共工具（费米子模块共用） ----------

def _check_frequencies(omega: float, omega_prime: Optional[float] = None):
    if not omega > 0:
        raise DomainError(f"ω 必须为正: {omega}")
    if omega_prime is not None and not omega_prime > 0:
        raise DomainError(f"ω' 必须为正: {omega_prime}")


def _check_alpha(alpha: float):
    if math.isnan(alpha) or alpha < 0:
        raise DomainError(f"α 必须非负: {alpha}")


def beta_params(k: float, u0: Optional[float], alpha: Optional[float],
                omega: float, omega_prime: float) -> Dict[str, Optional[float]]:
    if u0 is not None and math.isinf(u0):
        u0 = None
    return {"k": k, "u0": u0, "alpha": alpha, "omega": omega, "omega_prime": omega_prime}


def emit(notes: List[str], category, message: str, detail: Optional[str] = None):
    """发出警告并记录到结果的 warnings 列表"""
    warnings.warn(f"{message} ({detail})" if detail else message, category, stacklevel=3)
    notes.append(warning_text(category, message, detail))


def window_notes(traj: CollapseTrajectory, omega: float, omega_prime: float,
                 margin: float = 10.0) -> List[str]:
    """有效窗口 1 ≪ ω'/k, ω'/ω ≪ e^{ku0} 的检查，返回未满足条件的描述"""
    notes = []
    upper_log = traj.k * traj.u0 - math.log(margin)
    for name, ratio in (("ω'/k", omega_prime / traj.k), ("ω'/ω", omega_prime / omega)):
        if ratio < margin:
            notes.append(f"{name}={ratio:.3g} < {margin:g}")
        elif math.log(ratio) > upper_log:
            notes.append(f"{name}={ratio:.3g} > e^(k·u0)/{margin:g}")
    return notes


def asymptotic_notes(k: float, omega: float, omega_prime: float, margin: float = 10.0) -> List[str]:
    """渐近公式只依赖 (k, ω, ω')，检查窗口下界"""
    notes = []
    if omega_prime / k < margin:
        notes.append(f"ω'/k={omega_prime / k:.3g} < {margin:g}")
    if omega_prime / omega < margin:
        notes.append(f"ω'/ω={omega_prime / omega:.3g} < {margin:g}")
    return notes


def decay_cut(alpha: float, k: float, length: float) -> float:
    """e^{-2αs/k} 衰减后的有效积分长度"""
    if alpha <= 0:
        return length
    return min(length, DECAY_CUT * k / alpha)


def check_ceiling(k: float, omega_prime: float, ceiling: float = OMEGA_PRIME_CEILING):
    if omega_prime / k > ceiling:
        raise SubdivisionLimit(f"ω'/k = {omega_prime / k:.3g} 超过数值积分上限 {ceiling:g}")


def _inner_cfg(cfg: QuadratureConfig) -> QuadratureConfig:
    return cfg.tightened(100.0).with_(rel_tol=min(cfg.rel_tol, INNER_REL_TOL))


# ---------- 理想镜面 ----------

def beta_rr_perfect_numeric(traj: CollapseTrajectory, omega: float, omega_prime: float,
                            cfg: Optional[QuadratureConfig] = None,
                            margin: float = 10.0) -> BetaCoefficient:
    """理想反射镜 β^{RR}：两个边界项 + 振荡积分

    β = [ω'/(ω+ω') - e^{-iωu0} e^{-iω'V(u0)} ω'A/(ω+ω'A)] / (2πi√(ωω'))
        - (1/2πk)√(ω'/ω) ∫_0^{1-A} (1-s)^{iω/k} e^{-iω's/k} ds
    """
    _check_frequencies(omega, omega_prime)
    if traj.is_eternal:
        raise DomainError("理想镜面数值 β 需要有限 u0")
    cfg = cfg or QuadratureConfig()
    k, A = traj.k, traj.A
    notes: List[str] = []
    for note in window_notes(traj, omega, omega_prime, margin):
        emit(notes, RegimeWarning, "超出有效窗口", note)

    pref = 1.0 / (2j * math.pi * math.sqrt(omega * omega_prime))
    phase = cmath.exp(-1j * (omega * traj.u0 + omega_prime * traj.v0))
    boundary = pref * (omega_prime / (omega + omega_prime)
                       - phase * omega_prime * A / (omega + omega_prime * A))

    x, y = omega / k, omega_prime / k

    def f(s):
        return np.exp(1j * x * np.log1p(-s) - 1j * y * s)

    res = integrate(f, 0.0, 1.0 - A, cfg.with_(oscillation_rate=y))
    scale = math.sqrt(omega_prime / omega) / (2.0 * math.pi * k)
    value = boundary - scale * res.value
    logger.debug("[Scalar] perfect numeric ω=%g ω'=%g |β|²=%.6e (%d 次求值)",
                 omega, omega_prime, abs(value) ** 2, res.evaluations)
    return BetaCoefficient(value, Channel.RR, Method.NUMERIC, scale * res.err_estimate,
                           beta_params(k, traj.u0, None, omega, omega_prime), Field.SCALAR, notes)


def beta_rr_perfect_asymptotic(k: float, omega: float, omega_prime: float,
                               margin: float = 10.0) -> BetaCoefficient:
    """β ≅ e^{-iω'/k} (ik/ω')^{iω/k} Γ(1+iω/k) / (2πi√(ωω'))，|β|² 为 Planck 形式"""
    _check_frequencies(omega, omega_prime)
    notes: List[str] = []
    out_of_window = asymptotic_notes(k, omega, omega_prime, margin)
    for note in out_of_window:
        emit(notes, RegimeWarning, "渐近条件不满足", note)
    x = omega / k
    log_value = (-1j * omega_prime / k + log_imaginary_power(k / omega_prime, x)
                 + log_gamma(complex(1.0, x)))
    value = cmath.exp(log_value) / (2j * math.pi * math.sqrt(omega * omega_prime))

    printed = planck_factor(x) / (2.0 * math.pi * omega_prime * k)
    via_gamma = math.exp(-math.pi * x) * gamma_abs_sq_one_plus(x) / (4.0 * math.pi ** 2 * omega * omega_prime)
    assert math.isclose(via_gamma, printed, rel_tol=1e-9, abs_tol=1e-300)
    return BetaCoefficient(value, Channel.RR, Method.ASYMPTOTIC, 1.0 if out_of_window else 0.0,
                           beta_params(k, None, None, omega, omega_prime), Field.SCALAR, notes)


# ---------- 半透明镜面的模函数 ----------

def chirp_integral(coef: float, w: float, lam: float, length: float,
                   cfg: QuadratureConfig) -> complex:
    """∫_0^length e^{i·coef·(s+w)²} e^{-lam·s} ds"""
    if length <= 0:
        return 0j

    def f(s):
        return np.exp(1j * coef * (s + w) ** 2 - lam * s)
    rate = 2.0 * abs(coef) * (w + length)
    return integrate(f, 0.0, length, cfg.with_(oscillation_rate=rate)).value


def power_decay_integral(q: complex, w: float, lam: float, length: float,
                         cfg: QuadratureConfig) -> complex:
    """∫_0^length (s+w)^q e^{-lam·s} ds，q 为复指数"""
    if length <= 0:
        return 0j

    def f(s):
        return np.exp(q * np.log(s + w) - lam * s)
    return integrate(f, 0.0, length, cfg).value


def _w_of_u(traj: CollapseTrajectory, u: float) -> float:
    """w = 1 - kū/2 = e^{-ku/2}（中段）"""
    return math.exp(-0.5 * traj.k * u)


def mode_refl_scalar(traj: CollapseTrajectory, alpha: float, omega: float, u: float,
                     cfg: Optional[QuadratureConfig] = None,
                     paper_literal: bool = False) -> complex:
    """φ^refl_{ω,R}(u)，镜面右侧的反射部分

    paper_literal=True 时末段 s 积分的相位用 e^{iω/4(…)²}，否则与中段一致用 e^{iω/k(…)²}。
    """
    _check_frequencies(omega)
    _check_alpha(alpha)
    cfg = cfg or QuadratureConfig()
    k = traj.k
    norm = 1.0 / math.sqrt(4.0 * math.pi * omega)
    r = scatter(alpha, omega)[0]
    lam = 2.0 * alpha / k
    if u <= 0.0:
        return norm * r * cmath.exp(-1j * omega * u)

    inner = _inner_cfg(cfg)
    ubar = traj.comoving_u(u)
    if u <= traj.u0:
        w = _w_of_u(traj, u)
        c = 1.0 - w
        j = chirp_integral(omega / k, w, lam, decay_cut(alpha, k, c), inner)
        return norm * r * math.exp(-alpha * ubar) - lam * norm * cmath.exp(-1j * omega / k) * j

    w0 = traj.sqrt_A
    c0 = 1.0 - w0
    decay = math.exp(-alpha * (ubar - traj.ubar0))
    coef = omega / 4.0 if paper_literal else omega / k
    j0 = chirp_integral(coef, w0, lam, decay_cut(alpha, k, c0), inner)
    jump = (cmath.exp(-1j * omega * traj.advance(u))
            - cmath.exp(-1j * omega * traj.v0) * decay)
    return (norm * r * math.exp(-alpha * ubar)
            - norm * 1j * alpha / (traj.sqrt_A * omega + 1j * alpha) * jump
            - lam * norm * cmath.exp(-1j * omega / k) * decay * j0)


def mode_trans_scalar(traj: CollapseTrajectory, alpha: float, omega: float, u: float,
                      cfg: Optional[QuadratureConfig] = None) -> complex:
    """φ^trans_{ω,L}(u)，左入射模穿过镜面的部分"""
    _check_frequencies(omega)
    _check_alpha(alpha)
    cfg = cfg or QuadratureConfig()
    k = traj.k
    norm = 1.0 / math.sqrt(4.0 * math.pi * omega)
    r, s = scatter(alpha, omega)
    lam = 2.0 * alpha / k
    q = 2j * omega / k
    if u <= 0.0:
        return norm * s * cmath.exp(-1j * omega * u)

    inner = _inner_cfg(cfg)
    ubar = traj.comoving_u(u)
    if u <= traj.u0:
        w = _w_of_u(traj, u)
        kk = power_decay_integral(q, w, lam, decay_cut(alpha, k, 1.0 - w), inner)
        return (norm * cmath.exp(-1j * omega * u) + norm * r * math.exp(-alpha * ubar)
                - lam * norm * kk)

    w0 = traj.sqrt_A
    delta = ubar - traj.ubar0
    decay = math.exp(-alpha * delta)
    k0 = power_decay_integral(q, w0, lam, decay_cut(alpha, k, 1.0 - w0), inner)
    bracket = (omega * cmath.exp(-1j * omega * (u - traj.u0))
               + 1j * alpha * w0 * decay)
    return (norm * r * math.exp(-alpha * ubar)
            + norm * cmath.exp(-1j * omega * traj.u0) / (omega + 1j * alpha * w0) * bracket
            - lam * norm * decay * k0)


# ---------- 半透明镜面的 β ----------

def _zero_beta(channel: Channel, traj: CollapseTrajectory, alpha: float, omega: float,
               omega_prime: float, field: Field) -> BetaCoefficient:
    return BetaCoefficient(0j, channel, Method.NUMERIC, 0.0,
                           beta_params(traj.k, traj.u0, alpha, omega, omega_prime), field, [])


def reflected_overlap(traj: CollapseTrajectory, alpha: float, omega: float, omega_prime: float,
                      half: float, cfg: QuadratureConfig) -> complex:
    """I = ∫ e^{-iωu} Ψ(u) du 在 ℐ⁺_R 上，Ψ 为去掉归一化的反射模 φ^refl_{ω'}

    中段 Ψ = w^h [r' e^{-lam(1-w)} - lam e^{-ib} J(w)]，J(w) = ∫_w^1 x^h e^{ibx²} e^{-lam(x-w)} dx，
    h = 0 为标量场，h = 1/2 为 Dirac 上分量；w^{iω·2/k} 乘 J 的积分由 triangle_integral 给出。
    u<0 与 u>u0 两段是指数函数，按 e^{∓εu} 正则化取闭式；
    永久坍缩（或 √A 低于 ETERNAL_FLOOR）在截断点之后把 Ψ 当作常数。
    """
    k = traj.k
    r_p = scatter(alpha, omega_prime)[0]
    q, b, lam = 2j * omega / k, omega_prime / k, 2.0 * alpha / k
    chirp = cmath.exp(-1j * b)
    frozen = traj.is_eternal or traj.sqrt_A < ETERNAL_FLOOR
    total = r_p * 1j / (omega + omega_prime)

    if traj.u0 == 0.0:
        lo, psi_end = 1.0, r_p
    else:
        lo = middle_lower(traj)

        def source(eta):
            return cmath.exp(half * eta + 1j * b * math.exp(2.0 * eta))
        tri, j_end = triangle_integral(q - 1.0 + half, source, lam, lo, rate=2.0 * b,
                                       rtol=max(cfg.rel_tol, 1e-12))
        weight = log_weight_integral(q - 1.0 + half, lam, lo, cfg).value
        total += (2.0 / k) * (r_p * weight - lam * chirp * tri)
        psi_end = lo ** half * (r_p * math.exp(-lam * (1.0 - lo)) - lam * chirp * j_end)

    if frozen:
        return total + psi_end * cmath.exp(q * math.log(lo)) / (1j * omega)

    # u > u0：Ψ = P e^{-α√A(u-u0)} + Q e^{-iω'A(u-u0)}
    w0 = traj.sqrt_A
    big_q = (-w0 ** (2.0 * half) * 1j * alpha / (w0 * omega_prime + 1j * alpha)
             * cmath.exp(-1j * omega_prime * traj.v0))
    big_p = psi_end - big_q
    total += cmath.exp(-1j * omega * traj.u0) * (
        big_p / (alpha * w0 + 1j * omega) + big_q / (1j * (omega + omega_prime * traj.A)))
    return total


def beta_rr_semi_numeric(traj: CollapseTrajectory, alpha: float, omega: float, omega_prime: float,
                         cfg: Optional[QuadratureConfig] = None, margin: float = 10.0,
                         ceiling: float = OMEGA_PRIME_CEILING) -> BetaCoefficient:
    """β^{RR} = 2i ∫ φ^out_ω ∂_u φ^refl_{ω'} du，分部积分后为 -2ω ∫ φ^out_ω φ^refl_{ω'} du

    即 β = -(1/2π)√(ω/ω') ∫ e^{-iωu} Ψ(u) du，积分见 reflected_overlap。
    """
    _check_frequencies(omega, omega_prime)
    _check_alpha(alpha)
    if alpha == 0:
        return _zero_beta(Channel.RR, traj, alpha, omega, omega_prime, Field.SCALAR)
    check_ceiling(traj.k, omega_prime, ceiling)
    cfg = cfg or QuadratureConfig()
    notes: List[str] = []
    for note in window_notes(traj, omega, omega_prime, margin):
        emit(notes, RegimeWarning, "超出有效窗口", note)

    overlap = reflected_overlap(traj, alpha, omega, omega_prime, 0.0, cfg)
    value = -math.sqrt(omega / omega_prime) * overlap / (2.0 * math.pi)
    logger.debug("[Scalar] semi numeric α=%g ω=%g ω'=%g |β|²=%.6e", alpha, omega, omega_prime,
                 abs(value) ** 2)
    return BetaCoefficient(value, Channel.RR, Method.NUMERIC, abs(value) * max(cfg.rel_tol, 1e-10),
                           beta_params(traj.k, traj.u0, alpha, omega, omega_prime), Field.SCALAR, notes)


def beta_rr_semi_asymptotic(k: float, alpha: float, omega: float, omega_prime: float,
                            ratio: float = 1e3, margin: float = 10.0) -> BetaCoefficient:
    """α ≪ ω' 时的闭式：|β|² ≅ (1/2πkω)(α/ω')² (e^{2πω/k}+1)^{-1}"""
    _check_frequencies(omega, omega_prime)
    _check_alpha(alpha)
    notes: List[str] = []
    regime = classify_regime(alpha, omega_prime, ratio)
    flagged = regime not in (Regime.SEMI_TRANSPARENT, Regime.TRANSPARENT)
    if flagged:
        emit(notes, RegimeWarning, "需要 α ≪ ω'", f"regime={regime.value}")
    window = asymptotic_notes(k, omega, omega_prime, margin)
    for note in window:
        emit(notes, RegimeWarning, "渐近条件不满足", note)
    x = omega / k
    log_value = (-1j * omega_prime / k + log_imaginary_power(k / omega_prime, x, 0.5)
                 + log_gamma(complex(0.5, x)))
    value = alpha * cmath.exp(log_value) / (2j * math.pi * k * math.sqrt(omega * omega_prime))

    printed = (alpha / omega_prime) ** 2 * fermi_factor(x) / (2.0 * math.pi * k * omega)
    via_gamma = (alpha ** 2 * (k / omega_prime) * math.exp(-math.pi * x) * gamma_abs_sq_half_plus(x)
                 / (4.0 * math.pi ** 2 * k ** 2 * omega * omega_prime))
    assert math.isclose(via_gamma, printed, rel_tol=1e-9, abs_tol=1e-300)
    return BetaCoefficient(value, Channel.RR, Method.ASYMPTOTIC, 1.0 if (flagged or window) else 0.0,
                           beta_params(k, None, alpha, omega, omega_prime), Field.SCALAR, notes)


def middle_lower(traj: CollapseTrajectory) -> float:
    """中段在 w = e^{-ku/2} 中的下限 √A；永久坍缩截断到 ETERNAL_FLOOR"""
    return max(traj.sqrt_A, ETERNAL_FLOOR)


def log_weight_integral(q: complex, lam: float, lower: float, cfg: QuadratureConfig) -> IntegralResult:
    """∫_lower^1 w^q e^{-lam(1-w)} dw，在 η = ln w 中积分"""
    eta_lo = math.log(lower)
    # 1 - w > 2·DECAY_CUT/lam 的部分小于 e^{-80}
    w_cut = 1.0 - 2.0 * DECAY_CUT / lam if lam > 0 else 0.0
    if w_cut > lower:
        eta_lo = math.log(w_cut)

    def f(eta):
        return np.exp((q + 1.0) * eta + lam * np.expm1(eta))
    return integrate(f, eta_lo, 0.0, cfg.with_(oscillation_rate=abs(q.imag)))


def beta_rl_semi_numeric(traj: CollapseTrajectory, alpha: float, omega: float, omega_prime: float,
                         cfg: Optional[QuadratureConfig] = None, margin: float = 10.0) -> BetaCoefficient:
    """β^{RL} = 2i ∫ φ^out_ω ∂_u φ^trans_{ω'} du 在 ℐ⁺_R 上

    u<0 与 u>u0 两段是纯相位乘 e^{-α√A(u-u0)} 衰减，按 e^{∓εu} 正则化取闭式；
    中段换到 w = e^{-ku/2}，s 积分产生的三角形二重积分由 triangle_power_integral 计算。
    """
    _check_frequencies(omega, omega_prime)
    _check_alpha(alpha)
    if alpha == 0:
        return _zero_beta(Channel.RL, traj, alpha, omega, omega_prime, Field.SCALAR)
    cfg = cfg or QuadratureConfig()
    k = traj.k
    notes: List[str] = []
    for note in window_notes(traj, omega, omega_prime, margin):
        emit(notes, RegimeWarning, "超出有效窗口", note)

    n = 1.0 / math.sqrt(4.0 * math.pi * omega)
    n_p = 1.0 / math.sqrt(4.0 * math.pi * omega_prime)
    r_p, s_p = scatter(alpha, omega_prime)
    q, p, lam = 2j * omega / k, 2j * omega_prime / k, 2.0 * alpha / k
    lo = middle_lower(traj)
    total_freq = omega + omega_prime

    d_neg = n_p * s_p * omega_prime / total_freq

    if traj.u0 == 0.0:
        d_mid = 0j
        k0 = 0j
    else:
        end_phase = 0j if traj.is_eternal else cmath.exp(-1j * total_freq * traj.u0)
        tri, k0 = triangle_power_integral(q, p, lam, lo, rtol=max(cfg.rel_tol, 1e-12))
        d_mid = (-n_p * omega_prime * (1.0 - end_phase) / total_freq
                 - n_p * r_p * lam * log_weight_integral(q, lam, lo, cfg).value
                 + lam * n_p * (lam * tri - power_integral(q + p, lo)))

    d_pos = 0j
    if not traj.is_eternal:
        sa = traj.sqrt_A
        mu = alpha * sa
        phase_out = cmath.exp(-1j * omega * traj.u0)
        phase_in = cmath.exp(-1j * omega_prime * traj.u0)
        big_p = n_p * phase_in * omega_prime / (omega_prime + 1j * alpha * sa)
        big_q = (n_p * r_p * math.exp(-alpha * traj.ubar0)
                 + n_p * phase_in * 1j * alpha * sa / (omega_prime + 1j * alpha * sa)
                 - lam * n_p * k0)
        d_pos = phase_out * (-omega_prime * big_p / total_freq - mu * big_q / (mu + 1j * omega))

    value = 2j * n * (d_neg + d_mid + d_pos)
    logger.debug("[Scalar] RL α=%g ω=%g ω'=%g |β|²=%.6e", alpha, omega, omega_prime, abs(value) ** 2)
    err = abs(value) * max(cfg.rel_tol, 1e-10)
    return BetaCoefficient(value, Channel.RL, Method.NUMERIC, err,
                           beta_params(k, traj.u0, alpha, omega, omega_prime), Field.SCALAR, notes)
