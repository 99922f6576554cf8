# -*- coding: utf-8 -*-
"""
数据模型模块
"""

from .trajectory import CollapseTrajectory, TrajectoryVariant, eternal_collapse
from .mirror import ScatterCoefficients, Regime, Field, MirrorKind
from .results import (BetaCoefficient, Channel, Method, IntegralResult, SpinorValue,
                      SpectrumTable, Observable, ConvergenceReport)

__all__ = [
    'CollapseTrajectory', 'TrajectoryVariant', 'eternal_collapse',
    'ScatterCoefficients', 'Regime', 'Field', 'MirrorKind',
    'BetaCoefficient', 'Channel', 'Method', 'IntegralResult', 'SpinorValue',
    'SpectrumTable', 'Observable', 'ConvergenceReport',
]
