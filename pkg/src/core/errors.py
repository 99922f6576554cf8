# -*- coding: utf-8 -*-
"""
异常与警告定义
数值失败用异常，区间/近似条件不满足用警告（同时记录在结果对象上）
"""

from typing import Optional


class MirrorRadError(Exception):
    """所有库异常的基类"""


class DomainError(MirrorRadError, ValueError):
    """参数超出定义域（如 Re z <= 0、视界之后的 v）"""


class QuadratureError(MirrorRadError):
    """数值积分失败"""


class SubdivisionLimit(QuadratureError):
    """子区间数超过上限，附带当前最优结果"""

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result

    def __reduce__(self):
        return type(self), (self.args[0], self.result)


class FitUnstable(MirrorRadError):
    """幂律拟合残差过大"""

    def __init__(self, message: str, slope: float, residual: float):
        super().__init__(message)
        self.slope = slope
        self.residual = residual

    def __reduce__(self):
        return type(self), (self.args[0], self.slope, self.residual)


class MirrorRadWarning(UserWarning):
    """库警告基类"""


class RegimeWarning(MirrorRadWarning):
    """渐近公式的适用条件不满足，结果照常计算"""


class ToleranceNotReached(MirrorRadWarning):
    """积分未达到要求精度，返回最优值"""


class DivergenceWarning(MirrorRadWarning):
    """理想镜面的量随 u0 发散，按固定 u0 计算"""


def warning_text(category: type, message: str, detail: Optional[str] = None) -> str:
    """生成写入结果/CSV 的警告文本"""
    tag = {
        RegimeWarning: "regime",
        ToleranceNotReached: "tolerance",
        DivergenceWarning: "divergence",
    }.get(category, "warning")
    text = f"{tag}:{message}"
    if detail:
        text += f" ({detail})"
    return text
