# -*- coding: utf-8 -*-
"""
测试共用的轨迹与积分参数
"""

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.core.quadrature import QuadratureConfig  # noqa: E402
from src.models.trajectory import CollapseTrajectory, eternal_collapse  # noqa: E402


@pytest.fixture
def collapse():
    """k=1, u0=30：有效窗口 1 << ω'/k << e^{30}"""
    return CollapseTrajectory(1.0, 30.0)


@pytest.fixture
def short_collapse():
    return CollapseTrajectory(1.0, 5.0)


@pytest.fixture
def eternal():
    return eternal_collapse(1.0)


@pytest.fixture
def cfg():
    return QuadratureConfig()


@pytest.fixture
def loose_cfg():
    return QuadratureConfig(rel_tol=1e-7, abs_tol=1e-14)
