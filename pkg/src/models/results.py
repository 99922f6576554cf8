# -*- coding: utf-8 -*-
"""
计算结果数据模型
积分结果、Bogoliubov 系数、旋量值、谱表与收敛性报告
"""

import math
from dataclasses import dataclass, field as dc_field
from enum import Enum
from typing import Dict, List, Optional

import numpy as np

from ..core.errors import DomainError
from .mirror import Field

# 复数值直接使用 Python complex
ComplexValue = complex


def checked_complex(z) -> complex:
    """构造复数并拒绝 NaN/Inf"""
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"复数分量必须有限: {z}")
    return z


class Channel(str, Enum):
    RR = "RR"
    RL = "RL"


class Method(str, Enum):
    NUMERIC = "numeric"
    ASYMPTOTIC = "asymptotic"


class Observable(str, Enum):
    BETA_SQ = "BetaSq"
    N_OMEGA = "NOmega"
    RESPONSE_F = "ResponseF"
    RESPONSE_P = "ResponseP"


@dataclass
class IntegralResult:
    """自适应积分结果；err_estimate 为嵌入规则差的启发式估计"""
    value: complex
    err_estimate: float
    evaluations: int
    converged: bool = True
    panels: int = 0
    tail_bound: float = 0.0

    def __post_init__(self):
        if self.err_estimate < 0:
            raise DomainError("err_estimate 不能为负")

    def scaled(self, factor: complex) -> "IntegralResult":
        return IntegralResult(self.value * factor, self.err_estimate * abs(factor),
                              self.evaluations, self.converged, self.panels,
                              self.tail_bound * abs(factor))


@dataclass
class BetaCoefficient:
    """一个 β Bogoliubov 系数

    method 为 ASYMPTOTIC 时 err_estimate 为 0 或 1：1 表示超出适用区间。
    """
    value: complex
    channel: Channel
    method: Method
    err_estimate: float
    params: Dict[str, Optional[float]]
    field: Field = Field.SCALAR
    warnings: List[str] = dc_field(default_factory=list)

    @property
    def modulus_sq(self) -> float:
        return abs(self.value) ** 2

    def to_dict(self) -> Dict:
        return {
            "re": self.value.real,
            "im": self.value.imag,
            "modulus_sq": self.modulus_sq,
            "channel": self.channel.value,
            "method": self.method.value,
            "field": self.field.value,
            "err_estimate": self.err_estimate,
            "params": dict(self.params),
            "warnings": list(self.warnings),
        }


@dataclass(frozen=True)
class SpinorValue:
    """二维无质量 Dirac 旋量 ψ = (F(u), G(v))"""
    upper: complex
    lower: complex = 0j

    @property
    def norm_sq(self) -> float:
        return abs(self.upper) ** 2 + abs(self.lower) ** 2

    def transpose_dot(self, other: "SpinorValue") -> complex:
        """ψ^t φ（不取共轭）"""
        return self.upper * other.upper + self.lower * other.lower


@dataclass
class SpectrumTable:
    """频率网格上的观测量表"""
    omega_grid: np.ndarray
    values: np.ndarray
    observable: Observable
    params: Dict[str, Optional[float]]
    field: Field
    method: Method
    warnings: List[str] = dc_field(default_factory=list)

    def __post_init__(self):
        self.omega_grid = np.asarray(self.omega_grid, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.omega_grid.shape != self.values.shape:
            raise DomainError("网格与数值长度不一致")
        if np.any(np.diff(self.omega_grid) <= 0):
            raise DomainError("频率网格必须严格递增")
        if np.any(self.values < 0):
            raise DomainError(f"{self.observable.value} 必须非负")

    def rows(self) -> List[Dict]:
        return [{"omega": float(w), "value": float(x)} for w, x in zip(self.omega_grid, self.values)]

    def to_dict(self) -> Dict:
        return {
            "observable": self.observable.value,
            "field": self.field.value,
            "method": self.method.value,
            "params": dict(self.params),
            "hbar": 1,
            "rows": self.rows(),
            "warnings": list(self.warnings),
        }


@dataclass
class ConvergenceReport:
    """轨迹可积性判据"""
    b1: float
    b2: float
    integral_neg: float
    integral_pos: float
    asymptotically_inertial: bool
    condition_c: bool
    infrared_safe: bool
    acceleration_jumps: List[float] = dc_field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            "b1": self.b1,
            "b2": self.b2,
            "integral_neg": self.integral_neg,
            "integral_pos": self.integral_pos,
            "asymptotically_inertial": self.asymptotically_inertial,
            "condition_c": self.condition_c,
            "infrared_safe": self.infrared_safe,
            "acceleration_jumps": list(self.acceleration_jumps),
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "ConvergenceReport":
        return cls(
            b1=data["b1"],
            b2=data["b2"],
            integral_neg=data["integral_neg"],
            integral_pos=data["integral_pos"],
            asymptotically_inertial=data["asymptotically_inertial"],
            condition_c=data["condition_c"],
            infrared_safe=data["infrared_safe"],
            acceleration_jumps=list(data.get("acceleration_jumps", [])),
        )
