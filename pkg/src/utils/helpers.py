# -*- coding: utf-8 -*-
"""
工具函数
"""

import math
import os
from typing import Any, List

import numpy as np


def ensure_dir(path: str) -> bool:
    """确保目录存在"""
    if not path:
        return True
    try:
        os.makedirs(path, exist_ok=True)
        return True
    except OSError:
        return False


def parse_float(text: str) -> float:
    """解析浮点数，接受 inf"""
    value = float(text)
    if math.isnan(value):
        raise ValueError("不接受 nan")
    return value


def parse_grid(spec: str) -> List[float]:
    """解析网格：'min:max:count[:log]' 或逗号分隔的列表

    log 网格在 [min, max] 上按对数等距。
    """
    spec = spec.strip()
    if ":" not in spec:
        values = [parse_float(x) for x in spec.split(",") if x.strip()]
        if not values:
            raise ValueError(f"空网格: {spec!r}")
        return values
    parts = spec.split(":")
    if len(parts) not in (3, 4):
        raise ValueError(f"网格格式应为 min:max:count[:log]: {spec!r}")
    lo, hi, count = parse_float(parts[0]), parse_float(parts[1]), int(parts[2])
    if count < 1:
        raise ValueError("网格点数至少为 1")
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo:
        raise ValueError(f"网格端点无效: {spec!r}")
    if len(parts) == 4:
        if parts[3] != "log":
            raise ValueError(f"未知的网格类型: {parts[3]!r}")
        if lo <= 0:
            raise ValueError("对数网格要求 min > 0")
        values = np.geomspace(lo, hi, count)
    else:
        values = np.linspace(lo, hi, count)
    if count == 1:
        values = np.array([lo])
    return [float(v) for v in values]


def format_float(value: float) -> str:
    """repr 形式，保证往返一致"""
    return repr(float(value))


def format_cell(value: Any) -> str:
    """CSV 单元格：bool 小写，None 为空，列表用分号连接"""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    if isinstance(value, (list, tuple)):
        return ";".join(format_cell(v) for v in value)
    return str(value)


def json_safe(value: Any) -> Any:
    """转成 JSON 可写的值：非有限浮点数写为字符串"""
    if isinstance(value, dict):
        return {k: json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(v) for v in value]
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else repr(value)
    if isinstance(value, np.integer):
        return int(value)
    if hasattr(value, "value") and not isinstance(value, (int, str)):
        return value.value
    return value
