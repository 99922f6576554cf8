# -*- coding: utf-8 -*-
"""
特殊函数
复 Γ 函数对数、|Γ(1+ix)|^2 与 |Γ(1/2+ix)|^2 恒等式、(ik/ω')^{iω/k+p} 复幂
以及 Bose/Fermi 热分布因子
"""

import cmath
import math
from typing import Union

import numpy as np
from scipy import special

from .errors import DomainError

ArrayLike = Union[float, np.ndarray]

# πx 超过此值时 sinh/cosh 溢出，改用渐近式
_OVERFLOW_ARG = 700.0


def _as_output(x, out):
    return float(out) if np.ndim(x) == 0 else out


def log_gamma(z: complex) -> complex:
    """主分支 log Γ(z)，要求 Re z > 0

    数值由 scipy.special.loggamma 给出（Stirling 级数加递推，带状区域内相对误差 ~1e-15）。
    """
    z = complex(z)
    if not z.real > 0:
        raise DomainError(f"log_gamma 要求 Re z > 0: {z}")
    return complex(special.loggamma(z))


def gamma_abs_sq_one_plus(x: ArrayLike) -> ArrayLike:
    """|Γ(1+ix)|^2 = πx / sinh(πx)，x=0 时为 1"""
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0):
        raise DomainError("x 必须非负")
    px = np.pi * xa
    with np.errstate(over="ignore", invalid="ignore"):
        direct = np.where(px > 0, px / np.sinh(np.minimum(px, _OVERFLOW_ARG)), 1.0)
        tail = 2.0 * px * np.exp(-px)
    return _as_output(x, np.where(px > _OVERFLOW_ARG, tail, direct))


def gamma_abs_sq_half_plus(x: ArrayLike) -> ArrayLike:
    """|Γ(1/2+ix)|^2 = π / cosh(πx)，x=0 时为 π"""
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0):
        raise DomainError("x 必须非负")
    px = np.pi * xa
    with np.errstate(over="ignore"):
        direct = np.pi / np.cosh(np.minimum(px, _OVERFLOW_ARG))
        tail = 2.0 * np.pi * np.exp(-px)
    return _as_output(x, np.where(px > _OVERFLOW_ARG, tail, direct))


def log_imaginary_power(ratio: float, exponent_im: float, exponent_re: float = 0.0) -> complex:
    """log[(i·ratio)^{exponent_re + i·exponent_im}]，arg i = +π/2"""
    if not ratio > 0:
        raise DomainError(f"ratio 必须为正: {ratio}")
    exponent = complex(exponent_re, exponent_im)
    return exponent * complex(math.log(ratio), 0.5 * math.pi)


def imaginary_power(ratio: float, exponent_im: float, exponent_re: float = 0.0) -> complex:
    """(i·ratio)^{p + i·x}

    取 log i = iπ/2，模长为 ratio^p · e^{-πx/2}。
    """
    return cmath.exp(log_imaginary_power(ratio, exponent_im, exponent_re))


def planck_factor(x: ArrayLike) -> ArrayLike:
    """(e^{2πx} - 1)^{-1}，x = ω/k"""
    xa = np.asarray(x, dtype=float)
    with np.errstate(over="ignore", divide="ignore"):
        out = 1.0 / np.expm1(2.0 * np.pi * xa)
    return _as_output(x, out)


def fermi_factor(x: ArrayLike) -> ArrayLike:
    """(e^{2πx} + 1)^{-1}"""
    xa = np.asarray(x, dtype=float)
    # 写成 e^{-2πx}/(1+e^{-2πx})，大 x 不溢出
    with np.errstate(over="ignore"):
        e = np.exp(-2.0 * np.pi * np.abs(xa))
        out = np.where(xa >= 0, e / (1.0 + e), 1.0 / (1.0 + e))
    return _as_output(x, out)
