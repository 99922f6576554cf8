# -*- coding: utf-8 -*-
"""
计算设置
默认值 + 可选 JSON 文件 + 环境变量覆盖
"""

import json
import logging
import os
from typing import Optional

from src.core.quadrature import QuadratureConfig

logger = logging.getLogger(__name__)

# 环境变量 -> (设置项, 类型)
ENV_OVERRIDES = {
    "MIRRORRAD_RTOL": ("rel_tol", float),
    "MIRRORRAD_ATOL": ("abs_tol", float),
    "MIRRORRAD_JOBS": ("jobs", int),
}


class Settings:
    """计算设置"""

    DEFAULTS = {
        "rel_tol": 1e-9,
        "abs_tol": 1e-12,
        "max_subdivisions": 200000,
        "regime_ratio": 1e3,
        "window_margin": 10.0,
        "omega_prime_ceiling": 1e6,
        "ir_split_k_limit": 0.1,
        "rl_shortcut_ratio": 1e-3,
        "fit_residual_max": 0.25,
        "jobs": 0,
    }

    def __init__(self, config_file: Optional[str] = None, use_env: bool = True):
        self.config_file = config_file
        self.settings = self.DEFAULTS.copy()
        self.load()
        if use_env:
            self.apply_env()

    def load(self):
        """加载配置文件（若指定）"""
        if self.config_file and os.path.exists(self.config_file):
            try:
                with open(self.config_file, 'r', encoding='utf-8') as f:
                    loaded = json.load(f)
                unknown = set(loaded) - set(self.DEFAULTS)
                if unknown:
                    logger.warning("[Settings] 忽略未知设置项: %s", sorted(unknown))
                self.settings.update({k: v for k, v in loaded.items() if k in self.DEFAULTS})
            except (OSError, ValueError) as e:
                logger.warning("[Settings] 加载配置失败: %s", e)

    def apply_env(self, environ=None):
        """环境变量覆盖，格式错误的值记录后忽略"""
        environ = os.environ if environ is None else environ
        for var, (key, kind) in ENV_OVERRIDES.items():
            raw = environ.get(var)
            if raw is None or raw == "":
                continue
            try:
                value = kind(raw)
            except ValueError:
                logger.warning("[Settings] 环境变量 %s=%r 无法解析，已忽略", var, raw)
                continue
            if kind is float and not value > 0:
                logger.warning("[Settings] 环境变量 %s=%r 必须为正，已忽略", var, raw)
                continue
            self.settings[key] = value

    def save(self):
        """保存配置"""
        if not self.config_file:
            return
        try:
            with open(self.config_file, 'w', encoding='utf-8') as f:
                json.dump(self.settings, f, ensure_ascii=False, indent=2)
        except OSError as e:
            logger.warning("[Settings] 保存配置失败: %s", e)

    def get(self, key: str, default=None):
        """获取设置项"""
        return self.settings.get(key, default)

    def set(self, key: str, value):
        """设置配置项"""
        self.settings[key] = value
        self.save()

    def reset(self):
        """重置为默认"""
        self.settings = self.DEFAULTS.copy()
        self.save()

    def quadrature_config(self, **overrides) -> QuadratureConfig:
        """由当前设置构造积分参数"""
        params = {
            "rel_tol": float(self.settings["rel_tol"]),
            "abs_tol": float(self.settings["abs_tol"]),
            "max_subdivisions": int(self.settings["max_subdivisions"]),
        }
        params.update({k: v for k, v in overrides.items() if v is not None})
        return QuadratureConfig(**params)

    def worker_count(self) -> int:
        jobs = int(self.settings.get("jobs") or 0)
        return jobs if jobs > 0 else (os.cpu_count() or 1)
