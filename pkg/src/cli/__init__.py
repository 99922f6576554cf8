# -*- coding: utf-8 -*-
"""
命令行模块
"""

from .app import build_parser, main

__all__ = ['build_parser', 'main']
