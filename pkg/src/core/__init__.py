# -*- coding: utf-8 -*-
"""
核心计算模块
"""

from .errors import (MirrorRadError, DomainError, QuadratureError, SubdivisionLimit,
                     FitUnstable, RegimeWarning, ToleranceNotReached, DivergenceWarning)

__all__ = [
    'MirrorRadError', 'DomainError', 'QuadratureError', 'SubdivisionLimit',
    'FitUnstable', 'RegimeWarning', 'ToleranceNotReached', 'DivergenceWarning',
]
