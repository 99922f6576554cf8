# -*- coding: utf-8 -*-
import cmath
import math
import pickle

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.core.errors import DomainError, SubdivisionLimit
from src.core.quadrature import (QuadratureConfig, integrate, integrate_tail, power_integral,
                                 triangle_integral, triangle_power_integral)


def _chirp(s):
    return np.exp(1j * np.log1p(-s) - 10j * s)


def test_chirp_against_high_precision_oracle(cfg):
    mpmath.mp.dps = 30
    exact = mpmath.quad(lambda s: mpmath.exp(1j * mpmath.log(1 - s) - 10j * s), [0, 0.5, 0.9, 0.99])
    res = integrate(_chirp, 0.0, 0.99, cfg)
    assert res.converged
    assert abs(res.value - complex(exact)) < 1e-8


@pytest.mark.parametrize("omega", [1e2, 1e3, 1e4])
def test_oscillation_stress(omega, cfg):
    exact = (cmath.exp(1j * omega) - 1) / (1j * omega)
    res = integrate(lambda s: np.exp(1j * omega * s), 0.0, 1.0, cfg.with_(oscillation_rate=omega))
    assert abs(res.value - exact) / abs(exact) < 1e-8
    # 节点数随 Ω 至多线性增长
    assert res.evaluations <= 60 * omega + 500


def test_unseeded_oscillation_still_converges(cfg):
    omega = 500.0
    exact = (cmath.exp(1j * omega) - 1) / (1j * omega)
    res = integrate(lambda s: np.exp(1j * omega * s), 0.0, 1.0, cfg)
    assert abs(res.value - exact) / abs(exact) < 1e-8


def test_endpoint_substitution(cfg):
    lower = integrate(lambda x: x ** -0.5, 0.0, 1.0, cfg, power=2)
    upper = integrate(lambda d: d ** -0.75, 0.0, 1.0, cfg, power=4, singular="upper", offset=True)
    shifted = integrate(lambda d: d ** -0.5, 1.0, 3.0, cfg, power=2, offset=True)
    assert lower.value.real == pytest.approx(2.0, rel=1e-9)
    assert upper.value.real == pytest.approx(4.0, rel=1e-9)
    assert shifted.value.real == pytest.approx(2.0 * math.sqrt(2.0), rel=1e-9)


def test_offset_requires_substitution(cfg):
    with pytest.raises(DomainError):
        integrate(np.cos, 0.0, 1.0, cfg, offset=True)


def test_degenerate_and_reversed_interval(cfg):
    assert integrate(np.cos, 1.0, 1.0, cfg).value == 0
    forward = integrate(np.cos, 0.0, 2.0, cfg).value
    backward = integrate(np.cos, 2.0, 0.0, cfg).value
    assert backward == pytest.approx(-forward, rel=1e-14)
    assert forward.real == pytest.approx(math.sin(2.0), rel=1e-12)


def test_infinite_interval_rejected(cfg):
    with pytest.raises(DomainError):
        integrate(np.cos, 0.0, math.inf, cfg)


def test_subdivision_limit_carries_partial_result():
    cfg = QuadratureConfig(rel_tol=1e-14, abs_tol=1e-16, max_subdivisions=4)
    with pytest.raises(SubdivisionLimit) as info:
        integrate(lambda s: np.exp(1j * 2000.0 * s ** 2), 0.0, 1.0, cfg)
    partial = info.value.result
    assert partial is not None
    assert not partial.converged
    assert partial.panels <= 4
    # 并行 worker 把异常 pickle 回主进程时保留部分结果
    clone = pickle.loads(pickle.dumps(info.value))
    assert isinstance(clone, SubdivisionLimit)
    assert str(clone) == str(info.value)
    assert clone.result.value == partial.value


def test_config_validation():
    with pytest.raises(DomainError):
        QuadratureConfig(rel_tol=0.0)
    with pytest.raises(DomainError):
        QuadratureConfig(abs_tol=-1.0)
    base = QuadratureConfig(oscillation_rate=5.0, initial_panels=8)
    inner = base.tightened(100.0)
    assert inner.abs_tol == pytest.approx(base.abs_tol / 100.0)
    assert inner.oscillation_rate is None and inner.initial_panels == 1


@settings(max_examples=30, deadline=None)
@given(re=st.floats(-5, 5), im=st.floats(-5, 5))
def test_linearity(re, im):
    c = complex(re, im)
    cfg = QuadratureConfig(rel_tol=1e-11, abs_tol=1e-13)
    base = integrate(_chirp, 0.0, 0.9, cfg).value
    scaled = integrate(lambda s: c * _chirp(s), 0.0, 0.9, cfg).value
    assert abs(scaled - c * base) <= 1e-9 * max(1.0, abs(c * base))


@settings(max_examples=30, deadline=None)
@given(split=st.floats(0.05, 0.95))
def test_interval_additivity(split):
    cfg = QuadratureConfig(rel_tol=1e-11, abs_tol=1e-13)
    whole = integrate(_chirp, 0.0, 0.99, cfg)
    left = integrate(_chirp, 0.0, split, cfg)
    right = integrate(_chirp, split, 0.99, cfg)
    combined = 2.0 * (whole.err_estimate + left.err_estimate + right.err_estimate)
    assert abs(left.value + right.value - whole.value) <= max(combined, 1e-12)


def test_tail_power_decay(cfg):
    res = integrate_tail(lambda x: x ** -2.0, 1.0, cfg)
    assert res.value.real == pytest.approx(1.0, abs=1e-10)
    assert res.tail_bound <= cfg.abs_tol


def test_tail_with_analytic_remainder(cfg):
    res = integrate_tail(lambda x: x ** -2.0, 1.0, cfg, cut=10.0, tail=lambda x_cut: 1.0 / x_cut)
    assert res.value.real == pytest.approx(1.0, rel=1e-9)
    assert res.tail_bound == pytest.approx(0.1)


def test_tail_exponential_fermi_integral(cfg):
    # ∫_0^∞ (e^x + 1)^{-1} dx = ln 2
    res = integrate_tail(lambda x: 1.0 / (np.exp(x) + 1.0), 0.0, cfg, decay="exp", rate=1.0)
    assert abs(res.value.real - math.log(2.0)) < 1e-6


def test_tail_rejects_bad_input(cfg):
    with pytest.raises(DomainError):
        integrate_tail(lambda x: x ** -2.0, 0.0, cfg)
    with pytest.raises(DomainError):
        integrate_tail(np.exp, 0.0, cfg, decay="exp")
    with pytest.raises(DomainError):
        integrate_tail(np.exp, 1.0, cfg, decay="gauss")


@pytest.mark.parametrize("lam", [3.0, 500.0])
def test_triangle_integral_closed_form(lam):
    lower = 0.1
    t_val, k_val = triangle_power_integral(0.0, 0.0, lam, lower)
    k_exact = -math.expm1(-lam * (1 - lower)) / lam
    t_exact = (1 - lower) / lam + math.expm1(-lam * (1 - lower)) / lam ** 2
    assert k_val == pytest.approx(k_exact, rel=1e-7)
    assert t_val == pytest.approx(t_exact, rel=1e-7)


def test_triangle_integral_complex_powers():
    mpmath.mp.dps = 20
    a, b, lam, lower = 0.4j, -0.2 + 0.7j, 4.0, 0.2
    ma, mb = mpmath.mpc(a), mpmath.mpc(b)

    def inner(w):
        return mpmath.quad(lambda y: mpmath.power(y, mb) * mpmath.exp(-lam * (y - w)), [w, 1])
    t_exact = complex(mpmath.quad(lambda w: mpmath.power(w, ma) * inner(w), [lower, 1]))
    k_exact = complex(inner(lower))
    t_val, k_val = triangle_power_integral(a, b, lam, lower)
    assert abs(t_val - t_exact) < 1e-7 * abs(t_exact)
    assert abs(k_val - k_exact) < 1e-7 * abs(k_exact)


def test_triangle_integral_stiff_complex_powers():
    # lam 远大于振荡率时走隐式求解器
    mpmath.mp.dps = 20
    a, b, lam, lower = 0.4j, 2j, 500.0, 0.5
    ma, mb = mpmath.mpc(a), mpmath.mpc(b)

    def inner(w):
        return mpmath.quad(lambda y: mpmath.power(y, mb) * mpmath.exp(-lam * (y - w)),
                           [w, min(w + 0.02, 1), min(w + 0.1, 1), 1])
    t_exact = complex(mpmath.quad(lambda w: mpmath.power(w, ma) * inner(w), [lower, 0.75, 1]))
    k_exact = complex(inner(lower))
    t_val, k_val = triangle_power_integral(a, b, lam, lower)
    assert abs(t_val - t_exact) < 1e-6 * abs(t_exact)
    assert abs(k_val - k_exact) < 1e-6 * abs(k_exact)


def test_triangle_integral_chirp_source():
    mpmath.mp.dps = 20
    a, b, lam, lower = -1.0 + 2j, 3.0, 2.0, 0.2
    ma = mpmath.mpc(a)

    def inner(w):
        return mpmath.quad(lambda y: mpmath.expj(b * y * y) * mpmath.exp(-lam * (y - w)), [w, 1])
    t_exact = complex(mpmath.quad(lambda w: mpmath.power(w, ma) * inner(w), [lower, 0.5, 1]))
    k_exact = complex(inner(lower))
    t_val, k_val = triangle_integral(a, lambda eta: cmath.exp(1j * b * math.exp(2 * eta)), lam, lower,
                                     rate=2 * b)
    assert abs(t_val - t_exact) < 1e-7 * abs(t_exact)
    assert abs(k_val - k_exact) < 1e-7 * abs(k_exact)


def test_triangle_integral_rejects_bad_lower():
    with pytest.raises(DomainError):
        triangle_power_integral(0.0, 0.0, 1.0, 0.0)
    with pytest.raises(DomainError):
        triangle_power_integral(0.0, 0.0, -1.0, 0.5)


def test_power_integral():
    assert power_integral(-1.0, 0.25) == pytest.approx(math.log(4.0))
    expected = (1 - cmath.exp((1 + 1j) * math.log(0.3))) / (1 + 1j)
    assert abs(power_integral(1j, 0.3) - expected) < 1e-15
