# -*- coding: utf-8 -*-
"""
配置模块
"""

from .settings import Settings

__all__ = ['Settings']
