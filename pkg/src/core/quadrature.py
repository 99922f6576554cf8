# -*- coding: utf-8 -*-
"""
复值自适应积分
G7-K15 嵌入规则 + 全局误差驱动的二分；振荡率用于初始分段。
另含半无限区间积分与三角形区域二重积分（ODE 形式）。
"""

import cmath
import logging
import math
import warnings
from dataclasses import dataclass, replace
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from ..models.results import IntegralResult
from .errors import DomainError, QuadratureError, SubdivisionLimit, ToleranceNotReached

logger = logging.getLogger(__name__)

Integrand = Callable[[np.ndarray], np.ndarray]

# Kronrod 15 点节点（正半轴，降序，末项为 0）与权重
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
# Gauss 7 点权重，对应 _XGK[1], _XGK[3], _XGK[5], _XGK[7]
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[[1, 3, 5, 7, 9, 11, 13]] = [_WG[0], _WG[1], _WG[2], _WG[3], _WG[2], _WG[1], _WG[0]]
RULE_SIZE = 15

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureConfig:
    """积分参数"""
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_subdivisions: int = 200_000
    oscillation_rate: Optional[float] = None    # 最大相位导数，决定初始分段宽度
    initial_panels: int = 1

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("积分容差必须为正")
        if self.max_subdivisions < 2:
            raise DomainError("max_subdivisions 至少为 2")

    def with_(self, **changes) -> "QuadratureConfig":
        return replace(self, **changes)

    def tightened(self, factor: float = 10.0) -> "QuadratureConfig":
        """嵌套积分的内层：绝对容差收紧"""
        return replace(self, abs_tol=self.abs_tol / factor, oscillation_rate=None, initial_panels=1)


def _apply_rule(f: Integrand, left: np.ndarray, right: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """对每个子区间同时应用 G7/K15，返回 (K15 值, |K15 - G7|)"""
    center = 0.5 * (left + right)
    half = 0.5 * (right - left)
    x = center[:, None] + half[:, None] * NODES[None, :]
    fx = np.asarray(f(x.ravel()), dtype=complex).reshape(x.shape)
    # 实部虚部分开求和，保证 conj(f) 的结果严格为共轭
    re, im = fx.real, fx.imag
    kron = half * (re @ KRONROD_WEIGHTS + 1j * (im @ KRONROD_WEIGHTS))
    gauss = half * (re @ GAUSS_WEIGHTS + 1j * (im @ GAUSS_WEIGHTS))
    err = np.abs(kron - gauss)
    if not np.all(np.isfinite(kron)):
        raise QuadratureError("被积函数在节点处出现非有限值")
    return kron, err


def _substituted(f: Integrand, a: float, b: float, power: int, singular: str,
                 offset: bool = False) -> Integrand:
    """x = a + (b-a) t^p（下端奇异）或 x = b - (b-a) t^p（上端奇异），t ∈ [0, 1]

    offset=True 时 f 接收到奇异端点的距离 (b-a) t^p 而不是 x，端点附近不损失有效位。
    """
    span = b - a

    def g(t):
        jac = span * power * t ** (power - 1)
        dist = span * t ** power
        if offset:
            return f(dist) * jac
        x = a + dist if singular == "lower" else b - dist
        return f(x) * jac
    return g


def integrate(f: Integrand, a: float, b: float, cfg: Optional[QuadratureConfig] = None,
              power: int = 1, singular: str = "lower", offset: bool = False) -> IntegralResult:
    """自适应计算 ∫_a^b f

    Args:
        f: 向量化被积函数，接受 ndarray 返回同形状（复）数组
        a, b: 有限端点
        cfg: 积分参数
        power: 端点代换次数，2 可消去 (x-a)^{-1/2}，4 可消去 (x-a)^{-3/4}
        singular: 奇异端点 'lower' 或 'upper'
        offset: 为真时 f 的自变量是到奇异端点的距离（需 power != 1）

    Returns:
        IntegralResult；达到子区间上限时抛出 SubdivisionLimit
    """
    cfg = cfg or QuadratureConfig()
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError("integrate 只接受有限区间")
    if a == b:
        return IntegralResult(0j, 0.0, 0, True, 0)
    if a > b:
        res = integrate(f, b, a, cfg, power, "upper" if singular == "lower" else "lower", offset)
        return res.scaled(-1.0)

    if offset and power == 1:
        raise DomainError("offset 需要端点代换 (power != 1)")
    rate = cfg.oscillation_rate
    if power != 1:
        if singular not in ("lower", "upper"):
            raise DomainError(f"未知的奇异端点: {singular}")
        f = _substituted(f, a, b, power, singular, offset)
        if rate is not None:
            rate = rate * (b - a) * power
        a, b = 0.0, 1.0

    n0 = max(1, cfg.initial_panels)
    if rate:
        n0 = max(n0, int(math.ceil((b - a) * abs(rate) / (2.0 * math.pi))))
    n0 = min(n0, cfg.max_subdivisions // 2)
    edges = np.linspace(a, b, n0 + 1)
    left, right = edges[:-1], edges[1:]
    vals, errs = _apply_rule(f, left, right)
    evaluations = RULE_SIZE * n0
    converged = True
    scale = max(abs(a), abs(b))

    while True:
        total = vals.sum()
        err_total = errs.sum()
        tol = max(cfg.abs_tol, cfg.rel_tol * abs(total))
        if err_total <= tol:
            break
        n = len(vals)
        if n >= cfg.max_subdivisions:
            partial = IntegralResult(complex(total), float(err_total), evaluations, False, n)
            raise SubdivisionLimit(f"子区间数达到上限 {cfg.max_subdivisions}", partial)

        width = right - left
        splittable = (errs > tol / n) & (width > 64.0 * _EPS * max(scale, 1e-300))
        if not splittable.any():
            converged = False
            logger.debug("[Quadrature] 舍入误差限制，err=%.3e tol=%.3e", err_total, tol)
            warnings.warn(f"积分误差 {err_total:.3e} 未达到容差 {tol:.3e}", ToleranceNotReached, stacklevel=2)
            break
        idx = np.flatnonzero(splittable)
        room = cfg.max_subdivisions - n
        if len(idx) > room:
            idx = idx[np.argsort(errs[idx])[::-1][:room]]

        mid = 0.5 * (left[idx] + right[idx])
        new_left = np.concatenate([left[idx], mid])
        new_right = np.concatenate([mid, right[idx]])
        new_vals, new_errs = _apply_rule(f, new_left, new_right)
        evaluations += RULE_SIZE * len(new_left)

        keep = np.ones(n, dtype=bool)
        keep[idx] = False
        left = np.concatenate([left[keep], new_left])
        right = np.concatenate([right[keep], new_right])
        vals = np.concatenate([vals[keep], new_vals])
        errs = np.concatenate([errs[keep], new_errs])

    return IntegralResult(complex(vals.sum()), float(errs.sum()), evaluations, converged, len(vals))


def integrate_tail(f: Integrand, a: float, cfg: Optional[QuadratureConfig] = None,
                   decay: str = "power", rate: Optional[float] = None,
                   cut: Optional[float] = None,
                   tail: Optional[Callable[[float], complex]] = None) -> IntegralResult:
    """计算 ∫_a^∞ f：有限截断点 X 之前数值积分，之后用解析界

    decay='power' 假定 |f| <= C x^{-2}（代换 x = a/t）；decay='exp' 假定 |f| <= C e^{-rate (x-a)}。
    C 由若干采样点估计。给出 tail(X) 时把它作为 X 之后的贡献加入结果。
    """
    cfg = cfg or QuadratureConfig()
    if decay == "power":
        if not a > 0:
            raise DomainError("幂律尾部要求 a > 0")
        probes = a * np.array([1.0, 2.0, 4.0, 8.0, 16.0])
        c_bound = float(np.max(np.abs(f(probes)) * probes ** 2))
        if cut is not None:
            t_cut = a / cut
        elif c_bound > 0:
            t_cut = min(0.5, cfg.abs_tol * a / (2.0 * c_bound))
        else:
            t_cut = 0.5
        x_cut = a / t_cut

        def g(t):
            return f(a / t) * (a / t ** 2)
        body = integrate(g, t_cut, 1.0, cfg.with_(oscillation_rate=None))
        bound = c_bound / x_cut
    elif decay == "exp":
        if not (rate and rate > 0):
            raise DomainError("指数尾部需要正的衰减率")
        probes = a + np.array([0.0, 1.0, 2.0, 4.0]) / rate
        c_bound = float(np.max(np.abs(f(probes)) * np.exp(rate * (probes - a))))
        if cut is not None:
            x_cut = cut
        else:
            x_cut = a + max(1.0, math.log(max(2.0 * c_bound / (rate * cfg.abs_tol), math.e))) / rate
        panels = max(cfg.initial_panels, int(math.ceil((x_cut - a) * rate / 4.0)))
        body = integrate(f, a, x_cut, cfg.with_(initial_panels=panels))
        bound = c_bound * math.exp(-rate * (x_cut - a)) / rate
    else:
        raise DomainError(f"未知的衰减类型: {decay}")

    value = body.value
    if tail is not None:
        extra = complex(tail(x_cut))
        value += extra
        bound = abs(extra)
    logger.debug("[Quadrature] 尾部截断 X=%.6g, 尾部界 %.3e", x_cut, bound)
    return IntegralResult(value, body.err_estimate + bound, body.evaluations + 5,
                          body.converged, body.panels, bound)


def triangle_integral(a: complex, source: Callable[[float], complex], lam: float, lower: float,
                      rate: float = 1.0, rtol: float = 1e-10,
                      atol: float = 1e-15) -> Tuple[complex, complex]:
    """三角形区域上的二重积分

    T = ∫_lower^1 dw w^a K(w)，K(w) = ∫_w^1 dy g(y) e^{-lam (y-w)}，同时返回 K(lower)。
    source(η) 给出 g(e^η)；rate 为 source 在 η 中的最大振荡速率，用来判断刚性。

    在 η = ln w 下化为线性常微分方程，由 η=0 积到 η=ln(lower)：
        dK/dη = e^η (lam K - g(e^η)),   dT/dη = -e^{(a+1)η} K
    K、T 拆成实部虚部共四个实分量。反向积分时 K 的齐次部分衰减，稳定；lam 大时改用隐式 Radau。
    """
    if not 0 < lower < 1:
        raise DomainError(f"下限必须在 (0, 1) 内: {lower}")
    if lam < 0:
        raise DomainError("lam 必须非负")
    a = complex(a)
    eta_end = math.log(lower)

    def rhs(eta, y):
        e = math.exp(eta)
        g = complex(source(eta))
        c = np.exp((a + 1.0) * eta)
        kr, ki = y[0], y[1]
        return np.array([
            e * (lam * kr - g.real),
            e * (lam * ki - g.imag),
            -(c.real * kr - c.imag * ki),
            -(c.real * ki + c.imag * kr),
        ])

    def jac(eta, y):
        e = math.exp(eta)
        c = np.exp((a + 1.0) * eta)
        return np.array([
            [e * lam, 0.0, 0.0, 0.0],
            [0.0, e * lam, 0.0, 0.0],
            [-c.real, c.imag, 0.0, 0.0],
            [-c.imag, -c.real, 0.0, 0.0],
        ])

    oscillation = max(abs(rate), abs(a.imag), 1.0)
    stiff = lam > 50.0 * oscillation
    method = "Radau" if stiff else "DOP853"
    kwargs = {"jac": jac} if stiff else {}
    try:
        sol = solve_ivp(rhs, (0.0, eta_end), np.zeros(4), method=method,
                        rtol=rtol, atol=atol, **kwargs)
    except (ValueError, FloatingPointError) as e:
        raise QuadratureError(f"三角形积分 ODE 求解失败: {e}") from e
    if not sol.success:
        raise QuadratureError(f"三角形积分 ODE 求解失败: {sol.message}")
    logger.debug("[Quadrature] triangle ODE %s, %d 步", method, len(sol.t))
    y_end = sol.y[:, -1]
    return complex(y_end[2], y_end[3]), complex(y_end[0], y_end[1])


def triangle_power_integral(a: complex, b: complex, lam: float, lower: float,
                            rtol: float = 1e-10, atol: float = 1e-15) -> Tuple[complex, complex]:
    """g(y) = y^b 时的 triangle_integral"""
    b = complex(b)
    return triangle_integral(a, lambda eta: cmath.exp(b * eta), lam, lower,
                             rate=abs(b.imag), rtol=rtol, atol=atol)


def power_integral(exponent: complex, lower: float) -> complex:
    """∫_lower^1 w^exponent dw 的闭式"""
    e1 = complex(exponent) + 1.0
    if abs(e1) < 1e-300:
        return complex(-math.log(lower))
    return (1.0 - np.exp(e1 * math.log(lower))) / e1
