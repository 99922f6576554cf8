# -*- coding: utf-8 -*-
"""
工具函数模块
"""

from .helpers import ensure_dir, parse_grid, parse_float, format_float, format_cell, json_safe

__all__ = ['ensure_dir', 'parse_grid', 'parse_float', 'format_float', 'format_cell', 'json_safe']
