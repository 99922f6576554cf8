# -*- coding: utf-8 -*-
"""
运动镜面辐射计算 - 源码包
"""

__version__ = "1.0.0"
__author__ = "Mirror Radiation"
