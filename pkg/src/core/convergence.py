# -*- coding: utf-8 -*-
"""
可积性判据
轨迹分类（渐近惯性 / 条件 (c) / 红外安全）与 |β|² 的紫外衰减测量
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..models.results import ConvergenceReport
from ..models.trajectory import CollapseTrajectory
from .errors import DomainError, FitUnstable
from .quadrature import QuadratureConfig, integrate

logger = logging.getLogger(__name__)

FIT_RESIDUAL_MAX = 0.25

ArrayFn = Callable[[np.ndarray], np.ndarray]


def classify(traj: CollapseTrajectory) -> ConvergenceReport:
    """按分支斜率读出 B1、B2，积分取闭式"""
    if traj.is_eternal:
        return ConvergenceReport(
            b1=1.0, b2=0.0,
            integral_neg=0.0,
            integral_pos=1.0 / traj.k,
            asymptotically_inertial=False,
            condition_c=True,
            infrared_safe=False,
            acceleration_jumps=[0.0],
        )
    k, u0, A = traj.k, traj.u0, traj.A
    # ∫_0^{u0} (e^{-ku} - A) du，u >= u0 处 V' = A 恰好为零
    integral_pos = -math.expm1(-k * u0) / k - u0 * A
    report = ConvergenceReport(
        b1=1.0, b2=A,
        integral_neg=0.0,
        integral_pos=integral_pos,
        asymptotically_inertial=A > 0,
        condition_c=True,
        infrared_safe=u0 == 0.0,
        acceleration_jumps=[0.0, u0] if u0 > 0 else [],
    )
    logger.debug("[Convergence] %s: %s", traj, report.to_dict())
    return report


def jump_term_exponent() -> float:
    """加速度跳跃项给出的衰减指数：|β|² ∝ √(ωω')² / ω'^6 = ω'^{-5}"""
    return -5.0


@dataclass(frozen=True)
class TrajectoryHook:
    """uv_decay_probe 所需的轨迹接口：V'、V''、V 与 V'' 的紧支撑"""
    velocity: ArrayFn
    acceleration: ArrayFn
    advance: ArrayFn
    support: Tuple[float, float]
    predicted_slope: float = -5.0


def hook_for(traj: CollapseTrajectory) -> TrajectoryHook:
    if traj.is_eternal:
        raise DomainError("永久坍缩的加速度没有紧支撑")
    return TrajectoryHook(traj.velocity, traj.acceleration, traj.advance, (0.0, traj.u0),
                          jump_term_exponent())


def smooth_ramp(final_slope: float, length: float) -> TrajectoryHook:
    """V' 由 1 经五次 smoothstep 降到 final_slope 的测试轨迹

    V'' 连续，V''' 在两端跳跃，预期 |β|² ∝ ω'^{-7}。
    """
    if not (0 < final_slope < 1 and length > 0):
        raise DomainError("需要 0 < final_slope < 1 且 length > 0")
    drop = 1.0 - final_slope

    def clip(u):
        return np.clip(np.asarray(u, dtype=float) / length, 0.0, 1.0)

    def velocity(u):
        x = clip(u)
        return 1.0 - drop * (6 * x ** 5 - 15 * x ** 4 + 10 * x ** 3)

    def acceleration(u):
        x = clip(u)
        return -drop * (30 * x ** 4 - 60 * x ** 3 + 30 * x ** 2) / length

    def advance(u):
        x = clip(u)
        # ∫_0^u V' = u - drop·L·(x⁶ - 3x⁵ + 2.5x⁴)，u 超出 [0, L] 时不再调用
        return np.asarray(u, dtype=float) - drop * length * (x ** 6 - 3 * x ** 5 + 2.5 * x ** 4)

    return TrajectoryHook(velocity, acceleration, advance, (0.0, length), -7.0)


def beta_rr_general_ibp(velocity: ArrayFn, acceleration: ArrayFn, advance: ArrayFn,
                        support: Tuple[float, float], omega: float, omega_prime: float,
                        cfg: Optional[QuadratureConfig] = None) -> complex:
    """分部积分一次后的理想镜面 β：

        β = -(1/2πi) √(ωω') ∫ V''/(ω+ω'V')² e^{-iωu - iω'V(u)} du

    积分只在 V'' 的支撑上进行。未给 cfg 时绝对容差随被积函数幅度缩放：
    取 rel_tol·max|f|/(ω+ω'V')，即一次分部积分后的边界项量级，并不低于求和的舍入水平。
    """
    if not (omega > 0 and omega_prime > 0):
        raise DomainError("ω, ω' 必须为正")
    a, b = support

    def f(u):
        vp = velocity(u)
        return acceleration(u) / (omega + omega_prime * vp) ** 2 * np.exp(
            -1j * (omega * u + omega_prime * advance(u)))

    if cfg is None:
        grid = np.linspace(a, b, 257)
        f_max = float(np.max(np.abs(f(grid))))
        rate = omega + omega_prime * float(np.min(velocity(grid)))
        rel = 1e-10
        floor = 64 * np.finfo(float).eps * f_max * (b - a)
        cfg = QuadratureConfig(rel_tol=rel, abs_tol=max(rel * f_max / rate, floor, 1e-300))
    res = integrate(f, a, b, cfg.with_(oscillation_rate=omega + omega_prime))
    return -math.sqrt(omega * omega_prime) * res.value / (2j * math.pi)


@dataclass
class UvDecayFit:
    omega: float
    omega_primes: List[float]
    beta_sq: List[float]
    slope: float
    residual: float
    predicted_slope: float
    notes: List[str] = field(default_factory=list)

    def to_row(self) -> dict:
        return {"omega": self.omega, "slope": self.slope, "residual": self.residual,
                "predicted_slope": self.predicted_slope}


def uv_decay_probe(traj: Union[CollapseTrajectory, TrajectoryHook], omega: float,
                   omega_prime_list: Sequence[float], cfg: Optional[QuadratureConfig] = None,
                   residual_max: float = FIT_RESIDUAL_MAX) -> UvDecayFit:
    """对 log|β|² ~ log ω' 作最小二乘直线拟合

    残差为自然对数单位下的 RMS；超过 residual_max 抛出 FitUnstable（如 ω' 落在热平台内）。
    """
    hook = hook_for(traj) if isinstance(traj, CollapseTrajectory) else traj
    wps = np.asarray(sorted(float(w) for w in omega_prime_list))
    if len(wps) < 3:
        raise DomainError("拟合至少需要 3 个 ω'")
    values = np.array([abs(beta_rr_general_ibp(hook.velocity, hook.acceleration, hook.advance,
                                               hook.support, omega, wp, cfg)) ** 2 for wp in wps])
    if np.any(values <= 0):
        raise FitUnstable("|β|² 出现零值，无法取对数", math.nan, math.inf)
    x, y = np.log(wps), np.log(values)
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    logger.info("[Convergence] UV 衰减斜率 %.3f，残差 %.3f（预测 %.1f）", slope, residual,
                hook.predicted_slope)
    if residual > residual_max:
        raise FitUnstable(f"幂律拟合残差 {residual:.3f} 超过 {residual_max}", float(slope), residual)
    return UvDecayFit(omega, wps.tolist(), values.tolist(), float(slope), residual, hook.predicted_slope)
