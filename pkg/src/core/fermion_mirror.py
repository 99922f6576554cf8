# -*- coding: utf-8 -*-
"""
1+1 维无质量 Dirac 场镜面
边界条件、模函数与费米子 β 系数（统计反转方向与标量场相反）
"""

import cmath
import logging
import math
from typing import List, Optional

import numpy as np

from ..models.mirror import Field, Regime, classify_regime, scatter
from ..models.results import BetaCoefficient, Channel, Method, SpinorValue
from ..models.trajectory import CollapseTrajectory
from .errors import DomainError, RegimeWarning
from .quadrature import QuadratureConfig, integrate, triangle_power_integral
from .scalar_mirror import (OMEGA_PRIME_CEILING, _check_alpha, _check_frequencies, _inner_cfg,
                            _zero_beta, asymptotic_notes, beta_params, check_ceiling, decay_cut,
                            emit, log_weight_integral, middle_lower, reflected_overlap,
                            window_notes)
from .specfun import (fermi_factor, gamma_abs_sq_half_plus, gamma_abs_sq_one_plus,
                      log_gamma, log_imaginary_power, planck_factor)

logger = logging.getLogger(__name__)

SQRT_2PI = math.sqrt(2.0 * math.pi)

# ψ^trans 末段 iα√A 项的衰减：printed 为 e^{-α√A(ū-ū0)}，scalar 与标量场一致为 e^{-α(ū-ū0)}
TRANS_DECAY_CHOICES = ("printed", "scalar")


def dirac_current_normal(traj: CollapseTrajectory, psi: SpinorValue, u: float) -> float:
    """镜面上电流的法向分量（相差正因子）：V'(u)|G|² - |F|²"""
    return float(traj.velocity(u)) * abs(psi.lower) ** 2 - abs(psi.upper) ** 2


def perfect_in_mode(traj: CollapseTrajectory, omega: float, u: float, v: float) -> SpinorValue:
    """理想镜面的 in 模 ψ^in_{ω,R}(u, v)，镜面左侧 (v < V(u)) 为零"""
    _check_frequencies(omega)
    vu = traj.advance(u)
    if v < vu:
        return SpinorValue(0j, 0j)
    upper = -math.sqrt(traj.velocity(u)) * cmath.exp(-1j * omega * vu) / SQRT_2PI
    lower = cmath.exp(-1j * omega * v) / SQRT_2PI
    return SpinorValue(upper, lower)


def perfect_out_mode(traj: CollapseTrajectory, omega: float, u: float, v: float) -> SpinorValue:
    """理想镜面的 out 模 ψ^out_{ω,R}(u, v)

    反射项 √U'(v) e^{-iωU(v)} 放在下分量，这样镜面上 V'|G|² - |F|² = 0。
    """
    _check_frequencies(omega)
    if v < traj.advance(u):
        return SpinorValue(0j, 0j)
    uv = traj.retard(v)
    upper = cmath.exp(-1j * omega * u) / SQRT_2PI
    lower = -math.sqrt(1.0 / traj.velocity(uv)) * cmath.exp(-1j * omega * uv) / SQRT_2PI
    return SpinorValue(upper, lower)


# ---------- 理想镜面 β ----------

def beta_rr_perfect_fermion_numeric(traj: CollapseTrajectory, omega: float, omega_prime: float,
                                    cfg: Optional[QuadratureConfig] = None,
                                    margin: float = 10.0) -> BetaCoefficient:
    """β ≅ 1/(2πiω') - (1/2πk) ∫_0^{1-A} (1-s)^{iω/k-1/2} e^{-iω's/k} ds

    代换 1 - s = t² 去掉端点的 (1-s)^{-1/2}。
    """
    _check_frequencies(omega, omega_prime)
    if traj.is_eternal:
        raise DomainError("理想镜面数值 β 需要有限 u0")
    cfg = cfg or QuadratureConfig()
    k = traj.k
    notes: List[str] = []
    for note in window_notes(traj, omega, omega_prime, margin):
        emit(notes, RegimeWarning, "超出有效窗口", note)

    x, b = omega / k, omega_prime / k

    def f(t):
        return 2.0 * np.exp(2j * x * np.log(t) + 1j * b * t * t)

    res = integrate(f, traj.sqrt_A, 1.0, cfg.with_(oscillation_rate=2.0 * b))
    scale = cmath.exp(-1j * b) / (2.0 * math.pi * k)
    value = 1.0 / (2j * math.pi * omega_prime) - scale * res.value
    logger.debug("[Fermion] perfect numeric ω=%g ω'=%g |β|²=%.6e", omega, omega_prime, abs(value) ** 2)
    return BetaCoefficient(value, Channel.RR, Method.NUMERIC, abs(scale) * res.err_estimate,
                           beta_params(k, traj.u0, None, omega, omega_prime), Field.DIRAC, notes)


def beta_rr_perfect_fermion_asymptotic(k: float, omega: float, omega_prime: float,
                                       margin: float = 10.0) -> BetaCoefficient:
    """β ≅ (1/2πk) e^{-iω'/k} (ik/ω')^{iω/k+1/2} Γ(1/2+iω/k)，|β|² 为 Fermi 形式"""
    _check_frequencies(omega, omega_prime)
    notes: List[str] = []
    out_of_window = asymptotic_notes(k, omega, omega_prime, margin)
    for note in out_of_window:
        emit(notes, RegimeWarning, "渐近条件不满足", note)
    x = omega / k
    log_value = (-1j * omega_prime / k + log_imaginary_power(k / omega_prime, x, 0.5)
                 + log_gamma(complex(0.5, x)))
    value = cmath.exp(log_value) / (2.0 * math.pi * k)

    printed = fermi_factor(x) / (2.0 * math.pi * omega_prime * k)
    via_gamma = (k / omega_prime) * math.exp(-math.pi * x) * gamma_abs_sq_half_plus(x) / (4.0 * math.pi ** 2 * k ** 2)
    assert math.isclose(via_gamma, printed, rel_tol=1e-9, abs_tol=1e-300)
    return BetaCoefficient(value, Channel.RR, Method.ASYMPTOTIC, 1.0 if out_of_window else 0.0,
                           beta_params(k, None, None, omega, omega_prime), Field.DIRAC, notes)


# ---------- 半透明镜面的模函数 ----------

def _sqrt_chirp_integral(coef: float, w: float, lam: float, length: float,
                         cfg: QuadratureConfig) -> complex:
    """∫_0^length √(s+w) e^{i·coef·(s+w)²} e^{-lam·s} ds"""
    if length <= 0:
        return 0j

    def f(s):
        y = s + w
        return np.sqrt(y) * np.exp(1j * coef * y * y - lam * s)
    return integrate(f, 0.0, length, cfg.with_(oscillation_rate=2.0 * abs(coef) * (w + length))).value


def _half_power_integral(q: complex, w: float, lam: float, length: float,
                         cfg: QuadratureConfig) -> complex:
    """∫_0^length (s+w)^{q-1/2} e^{-lam·s} ds"""
    if length <= 0:
        return 0j

    def f(s):
        return np.exp((q - 0.5) * np.log(s + w) - lam * s)
    # w → 0 时 s^{-1/2} 端点奇异，代换 s = length·τ²
    return integrate(f, 0.0, length, cfg, power=2 if w < 1e-3 else 1).value


def mode_refl_fermion(traj: CollapseTrajectory, alpha: float, omega: float, u: float,
                      cfg: Optional[QuadratureConfig] = None) -> SpinorValue:
    """ψ^refl_{ω,R}(u)，只有上分量"""
    _check_frequencies(omega)
    _check_alpha(alpha)
    cfg = cfg or QuadratureConfig()
    k = traj.k
    r = scatter(alpha, omega)[0]
    lam = 2.0 * alpha / k
    if u <= 0.0:
        return SpinorValue(r * cmath.exp(-1j * omega * u) / SQRT_2PI)

    inner = _inner_cfg(cfg)
    ubar = traj.comoving_u(u)
    if u <= traj.u0:
        w = math.exp(-0.5 * k * u)
        weight = math.sqrt(w)
        j = _sqrt_chirp_integral(omega / k, w, lam, decay_cut(alpha, k, 1.0 - w), inner)
        upper = (r * weight * math.exp(-alpha * ubar)
                 - lam * cmath.exp(-1j * omega / k) * weight * j)
        return SpinorValue(upper / SQRT_2PI)

    w0 = traj.sqrt_A
    weight = math.sqrt(w0)
    decay = math.exp(-alpha * (ubar - traj.ubar0))
    j0 = _sqrt_chirp_integral(omega / k, w0, lam, decay_cut(alpha, k, 1.0 - w0), inner)
    jump = cmath.exp(-1j * omega * traj.advance(u)) - cmath.exp(-1j * omega * traj.v0) * decay
    upper = (r * weight * math.exp(-alpha * ubar)
             - 1j * alpha * w0 / (w0 * omega + 1j * alpha) * jump
             - lam * cmath.exp(-1j * omega / k) * weight * decay * j0)
    return SpinorValue(upper / SQRT_2PI)


def mode_trans_fermion(traj: CollapseTrajectory, alpha: float, omega: float, u: float,
                       cfg: Optional[QuadratureConfig] = None,
                       trans_decay: str = "printed") -> SpinorValue:
    """ψ^trans_{ω,L}(u)，只有上分量"""
    _check_frequencies(omega)
    _check_alpha(alpha)
    if trans_decay not in TRANS_DECAY_CHOICES:
        raise DomainError(f"未知的 trans_decay: {trans_decay}")
    cfg = cfg or QuadratureConfig()
    k = traj.k
    r, s = scatter(alpha, omega)
    lam = 2.0 * alpha / k
    q = 2j * omega / k
    if u <= 0.0:
        return SpinorValue(s * cmath.exp(-1j * omega * u) / SQRT_2PI)

    inner = _inner_cfg(cfg)
    ubar = traj.comoving_u(u)
    if u <= traj.u0:
        w = math.exp(-0.5 * k * u)
        weight = math.sqrt(w)
        kk = _half_power_integral(q, w, lam, decay_cut(alpha, k, 1.0 - w), inner)
        upper = (r * weight * math.exp(-alpha * ubar) + cmath.exp(-1j * omega * u)
                 - lam * weight * kk)
        return SpinorValue(upper / SQRT_2PI)

    w0 = traj.sqrt_A
    weight = math.sqrt(w0)
    delta = ubar - traj.ubar0
    decay = math.exp(-alpha * delta)
    mixed = math.exp(-alpha * w0 * delta) if trans_decay == "printed" else decay
    k0 = _half_power_integral(q, w0, lam, decay_cut(alpha, k, 1.0 - w0), inner)
    bracket = omega * cmath.exp(-1j * omega * (u - traj.u0)) + 1j * alpha * w0 * mixed
    upper = (r * weight * math.exp(-alpha * ubar)
             + cmath.exp(-1j * omega * traj.u0) / (omega + 1j * alpha * w0) * bracket
             - lam * weight * decay * k0)
    return SpinorValue(upper / SQRT_2PI)


# ---------- 半透明镜面 β ----------

def beta_rr_semi_fermion_numeric(traj: CollapseTrajectory, alpha: float, omega: float,
                                 omega_prime: float, cfg: Optional[QuadratureConfig] = None,
                                 margin: float = 10.0,
                                 ceiling: float = OMEGA_PRIME_CEILING) -> BetaCoefficient:
    """β^{RR} = ∫ (ψ^out_ω)^t ψ^refl_{ω'} du = (1/2π) ∫ e^{-iωu} Ψ(u) du

    Ψ = √(2π)·ψ^refl 的上分量，中段带 √w 权重；积分见 reflected_overlap。
    """
    _check_frequencies(omega, omega_prime)
    _check_alpha(alpha)
    if alpha == 0:
        return _zero_beta(Channel.RR, traj, alpha, omega, omega_prime, Field.DIRAC)
    check_ceiling(traj.k, omega_prime, ceiling)
    cfg = cfg or QuadratureConfig()
    notes: List[str] = []
    for note in window_notes(traj, omega, omega_prime, margin):
        emit(notes, RegimeWarning, "超出有效窗口", note)

    value = reflected_overlap(traj, alpha, omega, omega_prime, 0.5, cfg) / (2.0 * math.pi)
    logger.debug("[Fermion] semi numeric α=%g ω=%g ω'=%g |β|²=%.6e", alpha, omega, omega_prime,
                 abs(value) ** 2)
    return BetaCoefficient(value, Channel.RR, Method.NUMERIC, abs(value) * max(cfg.rel_tol, 1e-10),
                           beta_params(traj.k, traj.u0, alpha, omega, omega_prime), Field.DIRAC, notes)


def beta_rr_semi_fermion_asymptotic(k: float, alpha: float, omega: float, omega_prime: float,
                                    ratio: float = 1e3, margin: float = 10.0) -> BetaCoefficient:
    """β ≅ -(α/2πiωk)(ik/ω')^{iω/k+1} Γ(1+iω/k)，|β|² 为 Bose 形式

    ω → 0 时按 1/ω² 发散，记录为 infrared 警告。
    """
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
    if x < 1.0 / margin:
        emit(notes, RegimeWarning, "红外 Bose 增强", f"ω/k={x:.3g}")
    log_value = log_imaginary_power(k / omega_prime, x, 1.0) + log_gamma(complex(1.0, x))
    value = -alpha * cmath.exp(log_value) / (2j * math.pi * omega * k)

    printed = (alpha / omega_prime) ** 2 * planck_factor(x) / (2.0 * math.pi * omega * k)
    via_gamma = (alpha ** 2 * (k / omega_prime) ** 2 * math.exp(-math.pi * x) * gamma_abs_sq_one_plus(x)
                 / (4.0 * math.pi ** 2 * omega ** 2 * k ** 2))
    assert math.isclose(via_gamma, printed, rel_tol=1e-9, abs_tol=1e-300)
    return BetaCoefficient(value, Channel.RR, Method.ASYMPTOTIC, 1.0 if (flagged or window) else 0.0,
                           beta_params(k, None, alpha, omega, omega_prime), Field.DIRAC, notes)


def _tail(omega_out: float, u0: float, gamma: complex) -> complex:
    """∫_{u0}^∞ e^{-iω u} e^{-γ(u-u0)} du"""
    return cmath.exp(-1j * omega_out * u0) / (gamma + 1j * omega_out)


def beta_rl_semi_fermion_numeric(traj: CollapseTrajectory, alpha: float, omega: float,
                                 omega_prime: float, cfg: Optional[QuadratureConfig] = None,
                                 margin: float = 10.0, trans_decay: str = "printed",
                                 conjugate_product: bool = False) -> BetaCoefficient:
    """β^{RL} = ∫ (ψ^out_ω)^t ψ^trans_{ω'} du 在 ℐ⁺_R 上（转置，不取共轭）

    conjugate_product=True 时 out 模取共轭，即相位 e^{+iωu}。
    """
    _check_frequencies(omega, omega_prime)
    _check_alpha(alpha)
    if trans_decay not in TRANS_DECAY_CHOICES:
        raise DomainError(f"未知的 trans_decay: {trans_decay}")
    om = -omega if conjugate_product else omega
    total_freq = om + omega_prime
    if total_freq == 0:
        raise DomainError("共轭内积在 ω = ω' 处发散")
    if alpha == 0:
        return _zero_beta(Channel.RL, traj, alpha, omega, omega_prime, Field.DIRAC)
    cfg = cfg or QuadratureConfig()
    k = traj.k
    notes: List[str] = []
    for note in window_notes(traj, omega, omega_prime, margin):
        emit(notes, RegimeWarning, "超出有效窗口", note)

    r_p, s_p = scatter(alpha, omega_prime)
    q, p, lam = 2j * om / k, 2j * omega_prime / k, 2.0 * alpha / k
    lo = middle_lower(traj)

    total = s_p * 1j / total_freq
    k0 = 0j
    if traj.u0 > 0.0:
        end_phase = 0j if traj.is_eternal else cmath.exp(-1j * total_freq * traj.u0)
        tri, k0 = triangle_power_integral(q - 0.5, p - 0.5, lam, lo, rtol=max(cfg.rel_tol, 1e-12))
        total += (r_p * (2.0 / k) * log_weight_integral(q - 0.5, lam, lo, cfg).value
                  + (1.0 - end_phase) / (1j * total_freq)
                  - lam * (2.0 / k) * tri)

    if not traj.is_eternal:
        sa, u0 = traj.sqrt_A, traj.u0
        mu = alpha * sa
        nu = alpha * traj.A if trans_decay == "printed" else mu
        quarter = math.sqrt(sa)
        denom = omega_prime + 1j * alpha * sa
        phase_in = cmath.exp(-1j * omega_prime * u0)
        total += (r_p * quarter * math.exp(-alpha * traj.ubar0) * _tail(om, u0, mu)
                  + phase_in * omega_prime / denom * _tail(om, u0, 1j * omega_prime)
                  + phase_in * 1j * alpha * sa / denom * _tail(om, u0, nu)
                  - lam * quarter * k0 * _tail(om, u0, mu))

    value = total / (2.0 * math.pi)
    logger.debug("[Fermion] RL α=%g ω=%g ω'=%g |β|²=%.6e", alpha, omega, omega_prime, abs(value) ** 2)
    return BetaCoefficient(value, Channel.RL, Method.NUMERIC, abs(value) * max(cfg.rel_tol, 1e-10),
                           beta_params(k, traj.u0, alpha, omega, omega_prime), Field.DIRAC, notes)
