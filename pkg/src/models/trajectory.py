# -*- coding: utf-8 -*-
"""
坍缩轨迹数据模型
光锥坐标 (u, v) 与共动坐标 (ū, v̄) 下的分段解析轨迹
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Union

import numpy as np

from ..core.errors import DomainError

ArrayLike = Union[float, np.ndarray]


class TrajectoryVariant(str, Enum):
    """轨迹类型"""
    FINITE = "FiniteCollapse"
    ETERNAL = "EternalCollapse"


def _apply(x, fn):
    """标量进标量出，数组进数组出"""
    arr = np.asarray(x, dtype=float)
    out = fn(arr)
    if np.ndim(out) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class CollapseTrajectory:
    """模拟黑洞坍缩的镜面轨迹

    u <= 0 静止，0 <= u <= u0 按 v = (1 - e^{-ku})/k 加速，之后以斜率 A 匀速。
    u0 = inf 为永久坍缩（非渐近惯性）。
    """
    k: float
    u0: float = math.inf

    def __post_init__(self):
        if not (self.k > 0 and math.isfinite(self.k)):
            raise DomainError(f"k 必须为正的有限数: {self.k}")
        if math.isnan(self.u0) or self.u0 < 0:
            raise DomainError(f"u0 必须非负: {self.u0}")

    # ---------- 派生量 ----------

    @property
    def variant(self) -> TrajectoryVariant:
        return TrajectoryVariant.ETERNAL if math.isinf(self.u0) else TrajectoryVariant.FINITE

    @property
    def is_eternal(self) -> bool:
        return math.isinf(self.u0)

    @property
    def A(self) -> float:
        """末段斜率 A = e^{-k u0}"""
        if self.is_eternal:
            return 0.0
        return math.exp(-self.k * self.u0)

    @property
    def sqrt_A(self) -> float:
        if self.is_eternal:
            return 0.0
        return math.exp(-0.5 * self.k * self.u0)

    @property
    def v0(self) -> float:
        """V(u0)；永久坍缩时为视界 1/k"""
        if self.is_eternal:
            return 1.0 / self.k
        return -math.expm1(-self.k * self.u0) / self.k

    @property
    def ubar0(self) -> float:
        """ū(u0) = v̄(v0)"""
        if self.is_eternal:
            return 2.0 / self.k
        return -2.0 * math.expm1(-0.5 * self.k * self.u0) / self.k

    @property
    def horizon(self) -> float:
        """v 的上确界：永久坍缩为 1/k，否则无界"""
        return 1.0 / self.k if self.is_eternal else math.inf

    # ---------- 光锥映射 ----------

    def advance(self, u: ArrayLike) -> ArrayLike:
        """V(u)"""
        def fn(u):
            k, u0 = self.k, self.u0
            um = np.clip(u, 0.0, u0)
            out = np.where(u <= 0.0, u, -np.expm1(-k * um) / k)
            if not self.is_eternal:
                # 末段直接用仿射形式，避免大参数的指数
                out = np.where(u >= u0, self.v0 + self.A * (u - u0), out)
            else:
                # 舍入到 1/k 的值压回视界以内
                out = np.minimum(out, np.nextafter(self.horizon, 0.0))
            return out
        return _apply(u, fn)

    def retard(self, v: ArrayLike) -> ArrayLike:
        """U(v)，V 的反函数"""
        def fn(v):
            if self.is_eternal and np.any(v >= self.horizon):
                raise DomainError(f"永久坍缩轨迹在 v >= 1/k = {self.horizon} 处没有推迟时间原像")
            k, v0 = self.k, self.v0
            vm = np.clip(v, 0.0, v0)
            with np.errstate(divide="ignore"):
                # 靠近 1/k 时按差 1/k - v 求对数
                gap = np.maximum(1.0 / k - vm, 0.0)
                mid = np.where(k * vm < 0.5, -np.log1p(-k * vm) / k, -np.log(k * gap) / k)
            out = np.where(v <= 0.0, v, mid)
            if not self.is_eternal:
                out = np.where(v >= v0, self.u0 + (v - v0) / self.A, out)
            return out
        return _apply(v, fn)

    def velocity(self, u: ArrayLike) -> ArrayLike:
        """V'(u)，取值 {1, e^{-ku}, A}"""
        def fn(u):
            um = np.clip(u, 0.0, self.u0)
            out = np.where(u <= 0.0, 1.0, np.exp(-self.k * um))
            if not self.is_eternal:
                out = np.where(u >= self.u0, self.A, out)
            return out
        return _apply(u, fn)

    def acceleration(self, u: ArrayLike, side: int = 1) -> ArrayLike:
        """V''(u)；在 0 与 u0 处有跳跃，side=+1 取右极限，-1 取左极限"""
        def fn(u):
            inside = (u > 0.0) & (u < self.u0)
            if side >= 0:
                inside = inside | (u == 0.0)
            else:
                inside = inside | (u == self.u0)
            um = np.clip(u, 0.0, self.u0)
            return np.where(inside, -self.k * np.exp(-self.k * um), 0.0)
        return _apply(u, fn)

    # ---------- 共动坐标 ----------

    def comoving_u(self, u: ArrayLike) -> ArrayLike:
        """ū(u)，中段 (2/k)(1 - e^{-ku/2})"""
        def fn(u):
            k = self.k
            um = np.clip(u, 0.0, self.u0)
            out = np.where(u <= 0.0, u, -2.0 * np.expm1(-0.5 * k * um) / k)
            if not self.is_eternal:
                out = np.where(u >= self.u0, self.ubar0 + self.sqrt_A * (u - self.u0), out)
            return out
        return _apply(u, fn)

    def comoving_u_prime(self, u: ArrayLike) -> ArrayLike:
        """ū'(u) = sqrt(V'(u))"""
        return _apply(self.velocity(u), np.sqrt)

    def comoving_v(self, v: ArrayLike) -> ArrayLike:
        """v̄(v)，中段 (2/k)(1 - sqrt(1 - kv))"""
        def fn(v):
            if self.is_eternal and np.any(v >= self.horizon):
                raise DomainError(f"永久坍缩轨迹在 v >= 1/k = {self.horizon} 处无定义")
            k, v0 = self.k, self.v0
            vm = np.clip(v, 0.0, v0)
            # 1 - sqrt(1-x) = x / (1 + sqrt(1-x))，小 v 时无抵消
            mid = 2.0 * vm / (1.0 + np.sqrt(1.0 - k * vm))
            out = np.where(v <= 0.0, v, mid)
            if not self.is_eternal:
                out = np.where(v >= v0, self.ubar0 + (v - v0) / self.sqrt_A, out)
            return out
        return _apply(v, fn)

    def comoving_v_prime(self, v: ArrayLike) -> ArrayLike:
        """v̄'(v) = 1 / sqrt(V'(U(v)))"""
        return _apply(self.velocity(self.retard(v)), lambda x: 1.0 / np.sqrt(x))

    def with_u0(self, u0: float) -> "CollapseTrajectory":
        return CollapseTrajectory(k=self.k, u0=u0)

    def to_dict(self) -> Dict:
        return {
            "variant": self.variant.value,
            "k": self.k,
            "u0": None if self.is_eternal else self.u0,
            "A": self.A,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "CollapseTrajectory":
        u0 = data.get("u0")
        return cls(k=float(data["k"]), u0=math.inf if u0 is None else float(u0))

    def __str__(self) -> str:
        return f"{self.variant.value}(k={self.k}, u0={self.u0})"


def eternal_collapse(k: float) -> CollapseTrajectory:
    """永久坍缩轨迹"""
    return CollapseTrajectory(k=k, u0=math.inf)


# 与操作名对应的函数形式

def ray_advance(traj: CollapseTrajectory, u: ArrayLike) -> ArrayLike:
    return traj.advance(u)


def ray_retard(traj: CollapseTrajectory, v: ArrayLike) -> ArrayLike:
    return traj.retard(v)


def ray_velocity(traj: CollapseTrajectory, u: ArrayLike) -> ArrayLike:
    return traj.velocity(u)


def comoving_u(traj: CollapseTrajectory, u: ArrayLike) -> ArrayLike:
    return traj.comoving_u(u)


def comoving_v(traj: CollapseTrajectory, v: ArrayLike) -> ArrayLike:
    return traj.comoving_v(v)
