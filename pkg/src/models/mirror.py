# -*- coding: utf-8 -*-
"""
半透明镜面数据模型
δ 势耦合 α 给出反射/透射系数 r(ω) = -iα/(ω+iα), s(ω) = ω/(ω+iα)
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional, Tuple, Union

import numpy as np

from ..core.errors import DomainError


class Regime(str, Enum):
    """α 与 ω' 的相对大小"""
    PERFECT_LIMIT = "PerfectLimit"          # ω' << α
    TRANSPARENT = "Transparent"             # α ≈ 0
    SEMI_TRANSPARENT = "SemiTransparent"    # α << ω'
    INTERMEDIATE = "Intermediate"


class Field(str, Enum):
    SCALAR = "scalar"
    DIRAC = "dirac"


class MirrorKind(str, Enum):
    PERFECT = "perfect"
    SEMI = "semitransparent"


@dataclass(frozen=True)
class ScatterCoefficients:
    """静止半透明镜的散射系数，满足 |r|^2 + |s|^2 = 1"""
    alpha: float

    def __post_init__(self):
        if math.isnan(self.alpha) or self.alpha < 0:
            raise DomainError(f"alpha 必须非负: {self.alpha}")

    def _unit(self, omega):
        # (cos θ, sin θ)，tan θ = α/ω；r、s 都写成它们的乘积，|r|² + |s|² 只差舍入
        h = np.hypot(omega, self.alpha)
        return omega / h, self.alpha / h

    def reflection(self, omega: Union[float, np.ndarray]):
        c, sn = self._unit(omega)
        return -sn * sn - 1j * (sn * c)

    def transmission(self, omega: Union[float, np.ndarray]):
        c, sn = self._unit(omega)
        return c * c - 1j * (c * sn)

    def pair(self, omega: float) -> Tuple[complex, complex]:
        if not omega > 0:
            raise DomainError(f"ω 必须为正: {omega}")
        return complex(self.reflection(omega)), complex(self.transmission(omega))

    def to_dict(self) -> Dict:
        return {"alpha": self.alpha}


def scatter(alpha: float, omega: float) -> Tuple[complex, complex]:
    """返回 (r(ω), s(ω))"""
    return ScatterCoefficients(alpha).pair(omega)


def classify_regime(alpha: Optional[float], omega_prime: float, ratio: float = 1e3) -> Regime:
    """按阈值 ratio 判断 "<<"；alpha 为 None 表示理想镜面"""
    if alpha is None or math.isinf(alpha):
        return Regime.PERFECT_LIMIT
    if alpha == 0.0:
        return Regime.TRANSPARENT
    if alpha >= ratio * omega_prime:
        return Regime.PERFECT_LIMIT
    if omega_prime >= ratio * alpha:
        return Regime.SEMI_TRANSPARENT
    return Regime.INTERMEDIATE
