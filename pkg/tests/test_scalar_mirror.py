# -*- coding: utf-8 -*-
import cmath
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate as sp_integrate

from src.core.errors import DomainError, RegimeWarning
from src.core.scalar_mirror import (beta_rl_semi_numeric, beta_rr_perfect_asymptotic,
                                    beta_rr_perfect_numeric, beta_rr_semi_asymptotic,
                                    beta_rr_semi_numeric, mode_refl_scalar, mode_trans_scalar,
                                    window_notes)
from src.core.specfun import fermi_factor, planck_factor
from src.models.results import Channel, Method
from src.models.trajectory import CollapseTrajectory, eternal_collapse


def planck_beta_sq(k, omega, omega_prime):
    return planck_factor(omega / k) / (2 * math.pi * omega_prime * k)


def fermi_semi_beta_sq(k, alpha, omega, omega_prime):
    return (alpha / omega_prime) ** 2 * fermi_factor(omega / k) / (2 * math.pi * k * omega)


# ---------- 理想镜面 ----------

def test_perfect_numeric_reference_point(collapse):
    beta = beta_rr_perfect_numeric(collapse, 1.0, 100.0)
    assert beta.channel is Channel.RR and beta.method is Method.NUMERIC
    assert beta.modulus_sq == pytest.approx(2.98e-6, rel=0.05)


@pytest.mark.parametrize("omega", [0.25, 0.5, 1.0])
@pytest.mark.parametrize("omega_prime", [50.0, 100.0, 200.0])
def test_planck_spectrum(collapse, omega, omega_prime):
    beta = beta_rr_perfect_numeric(collapse, omega, omega_prime)
    assert beta.modulus_sq == pytest.approx(planck_beta_sq(1.0, omega, omega_prime), rel=0.05)


def test_static_mirror_creates_nothing():
    static = CollapseTrajectory(1.0, 0.0)
    with pytest.warns(RegimeWarning):
        beta = beta_rr_perfect_numeric(static, 1.0, 0.01)
    assert beta.modulus_sq < 1e-20


def test_perfect_numeric_against_independent_quadrature(collapse):
    k, omega, omega_prime = 1.0, 0.5, 50.0
    x, y = omega / k, omega_prime / k
    A = collapse.A

    # s = 1 - e^{-t} 代换后的光滑被积函数
    def part(t, which):
        z = cmath.exp(-t - 1j * x * t - 1j * y * (1 - math.exp(-t)))
        return z.real if which == 0 else z.imag
    opts = {"limit": 2000, "epsabs": 1e-15, "epsrel": 1e-13}
    re = sp_integrate.quad(part, 0.0, k * collapse.u0, args=(0,), **opts)[0]
    im = sp_integrate.quad(part, 0.0, k * collapse.u0, args=(1,), **opts)[0]
    integral = complex(re, im)
    pref = 1 / (2j * math.pi * math.sqrt(omega * omega_prime))
    phase = cmath.exp(-1j * (omega * collapse.u0 + omega_prime * collapse.v0))
    boundary = pref * (omega_prime / (omega + omega_prime)
                       - phase * omega_prime * A / (omega + omega_prime * A))
    expected = boundary - math.sqrt(omega_prime / omega) / (2 * math.pi * k) * integral

    beta = beta_rr_perfect_numeric(collapse, omega, omega_prime)
    assert abs(beta.value - expected) <= 1e-7 * abs(expected)


def test_perfect_numeric_is_stable_in_u0(collapse):
    later = collapse.with_u0(collapse.u0 + 5.0)
    a = beta_rr_perfect_numeric(collapse, 1.0, 100.0).modulus_sq
    b = beta_rr_perfect_numeric(later, 1.0, 100.0).modulus_sq
    assert abs(a - b) / a < 0.01


def test_perfect_asymptotic_matches_numeric(collapse):
    num = beta_rr_perfect_numeric(collapse, 0.5, 100.0)
    asym = beta_rr_perfect_asymptotic(1.0, 0.5, 100.0)
    assert asym.modulus_sq == pytest.approx(num.modulus_sq, rel=0.05)
    assert not asym.warnings


@settings(max_examples=20, deadline=None)
@given(k=st.floats(0.1, 5.0), x=st.floats(0.01, 5.0), y=st.floats(20.0, 1e5))
def test_perfect_asymptotic_modulus_identity(k, x, y):
    beta = beta_rr_perfect_asymptotic(k, x * k, y * k, margin=1.0)
    expected = planck_beta_sq(k, x * k, y * k)
    assert beta.modulus_sq == pytest.approx(expected, rel=1e-12)


def test_window_guard(collapse):
    assert window_notes(collapse, 1.0, 100.0) == []
    assert window_notes(collapse, 1.0, 2.0)
    assert window_notes(CollapseTrajectory(1.0, 3.0), 1.0, 100.0)
    with pytest.warns(RegimeWarning):
        beta = beta_rr_perfect_numeric(CollapseTrajectory(1.0, 3.0), 1.0, 100.0)
    assert any(w.startswith("regime:") for w in beta.warnings)


def test_perfect_numeric_rejects_bad_input(collapse):
    with pytest.raises(DomainError):
        beta_rr_perfect_numeric(eternal_collapse(1.0), 1.0, 100.0)
    with pytest.raises(DomainError):
        beta_rr_perfect_numeric(collapse, 0.0, 100.0)
    with pytest.raises(DomainError):
        beta_rr_perfect_asymptotic(1.0, 1.0, -1.0)


# ---------- 模函数 ----------

@pytest.mark.parametrize("u", [-1.0, 2.0, 7.0])
def test_modes_transparent_limit(short_collapse, u):
    omega = 2.0
    norm = 1 / math.sqrt(4 * math.pi * omega)
    refl = mode_refl_scalar(short_collapse, 1e-8, omega, u)
    trans = mode_trans_scalar(short_collapse, 1e-8, omega, u)
    assert abs(refl) < 1e-6
    assert abs(trans - norm * cmath.exp(-1j * omega * u)) < 1e-6


def test_mode_refl_perfect_limit(short_collapse):
    omega, u = 2.0, -1.0
    refl = mode_refl_scalar(short_collapse, 1e6, omega, u)
    expected = -cmath.exp(-1j * omega * short_collapse.advance(u)) / math.sqrt(4 * math.pi * omega)
    assert abs(refl - expected) < 1e-5


@pytest.mark.parametrize("mode", [mode_refl_scalar, mode_trans_scalar])
def test_mode_continuity(short_collapse, mode):
    alpha, omega = 1.0, 2.0
    for junction in (0.0, short_collapse.u0):
        left = mode(short_collapse, alpha, omega, junction)
        right = mode(short_collapse, alpha, omega, junction + 1e-10)
        assert abs(left - right) < 1e-7


def test_paper_literal_only_changes_late_branch(short_collapse):
    early = [mode_refl_scalar(short_collapse, 1.0, 2.0, 3.0, paper_literal=flag) for flag in (False, True)]
    assert early[0] == early[1]
    late = [mode_refl_scalar(short_collapse, 1.0, 2.0, 8.0, paper_literal=flag) for flag in (False, True)]
    assert late[0] != late[1]


def test_mode_rejects_negative_alpha(short_collapse):
    with pytest.raises(DomainError):
        mode_refl_scalar(short_collapse, -1.0, 1.0, 0.5)


# ---------- 半透明镜面 ----------

@settings(max_examples=20, deadline=None)
@given(alpha=st.floats(1e-3, 1.0), x=st.floats(0.05, 3.0), y=st.floats(1e3, 1e6))
def test_semi_asymptotic_modulus_identity(alpha, x, y):
    beta = beta_rr_semi_asymptotic(1.0, alpha, x, y, margin=1.0)
    assert beta.modulus_sq == pytest.approx(fermi_semi_beta_sq(1.0, alpha, x, y), rel=1e-12)


def test_semi_asymptotic_flags_regime():
    with pytest.warns(RegimeWarning):
        beta = beta_rr_semi_asymptotic(1.0, 10.0, 1.0, 100.0)
    assert beta.warnings


def test_zero_coupling_is_free(collapse):
    assert beta_rr_semi_numeric(collapse, 0.0, 1.0, 100.0).modulus_sq == 0.0
    assert beta_rl_semi_numeric(collapse, 0.0, 1.0, 100.0).modulus_sq == 0.0


@pytest.mark.slow
def test_semi_numeric_reference_point(collapse):
    beta = beta_rr_semi_numeric(collapse, 1.0, 1.0, 200.0)
    expected = fermi_semi_beta_sq(1.0, 1.0, 1.0, 200.0)
    assert expected == pytest.approx(7.4e-9, rel=0.01)
    assert beta.modulus_sq == pytest.approx(expected, rel=0.10)


@pytest.mark.slow
@pytest.mark.parametrize("omega", [0.5, 1.0])
@pytest.mark.parametrize("omega_prime", [100.0, 200.0])
def test_fermi_spectrum(collapse, omega, omega_prime):
    beta = beta_rr_semi_numeric(collapse, 1.0, omega, omega_prime)
    assert beta.modulus_sq == pytest.approx(fermi_semi_beta_sq(1.0, 1.0, omega, omega_prime), rel=0.10)


@pytest.mark.slow
def test_statistics_inversion(collapse):
    omega, omega_prime, alpha = 1.0, 200.0, 1.0
    semi = beta_rr_semi_numeric(collapse, alpha, omega, omega_prime).modulus_sq
    perfect = beta_rr_perfect_numeric(collapse, omega, omega_prime).modulus_sq
    fermi_shape = semi / (alpha / omega_prime) ** 2 * (2 * math.pi * omega)
    bose_shape = perfect * 2 * math.pi * omega_prime
    assert fermi_shape == pytest.approx(fermi_factor(omega), rel=0.10)
    assert bose_shape == pytest.approx(planck_factor(omega), rel=0.05)


@pytest.mark.slow
def test_semi_reduces_to_perfect_for_large_coupling(collapse):
    omega, omega_prime = 1.0, 10.0
    semi = beta_rr_semi_numeric(collapse, 1e4, omega, omega_prime).modulus_sq
    perfect = beta_rr_perfect_numeric(collapse, omega, omega_prime).modulus_sq
    assert semi == pytest.approx(perfect, rel=0.15)


@pytest.mark.slow
@pytest.mark.parametrize("omega, omega_prime", [(0.5, 20.0), (1.0, 50.0), (2.0, 100.0)])
def test_regime_collapse(collapse, omega, omega_prime):
    semi = beta_rr_semi_numeric(collapse, 1e3 * omega_prime, omega, omega_prime).modulus_sq
    perfect = beta_rr_perfect_numeric(collapse, omega, omega_prime).modulus_sq
    assert semi == pytest.approx(perfect, rel=0.02)


def test_rl_vanishes_for_weak_coupling(collapse):
    beta = beta_rl_semi_numeric(collapse, 1e-6, 1.0, 100.0)
    assert beta.channel is Channel.RL
    assert beta.modulus_sq < 1e-12


def test_rl_scales_quadratically(collapse):
    small = beta_rl_semi_numeric(collapse, 1e-3, 1.0, 100.0).modulus_sq
    double = beta_rl_semi_numeric(collapse, 2e-3, 1.0, 100.0).modulus_sq
    assert small > 0
    assert double / small == pytest.approx(4.0, rel=0.30)


def test_rl_on_eternal_collapse(eternal):
    beta = beta_rl_semi_numeric(eternal, 0.5, 1.0, 100.0)
    assert math.isfinite(beta.modulus_sq)


# ---------- 与模函数的直接内积对照 ----------

def overlap_by_quadrature(mode, traj, omega, omega_prime, late_rates):
    """∫ e^{-iωu} mode(u) du：中段对模函数做 scipy 积分，u<0 与 u>u0 两段取指数函数的闭式

    u>u0 时模函数是两个指数之和 P e^{-g1 (u-u0)} + Q e^{-g2 (u-u0)}，P、Q 由两点求出，第三点验证。
    """
    def part(take):
        return sp_integrate.quad(lambda u: take(cmath.exp(-1j * omega * u) * mode(u)), 0.0, traj.u0,
                                 limit=400, epsabs=1e-14, epsrel=1e-11)[0]

    middle = part(lambda z: z.real) + 1j * part(lambda z: z.imag)
    early = mode(0.0) * 1j / (omega + omega_prime)
    g1, g2 = late_rates
    m0, m1, m2 = (mode(traj.u0 + d) for d in (0.0, 1.0, 2.5))
    e1, e2 = cmath.exp(-g1), cmath.exp(-g2)
    q = (m1 - m0 * e1) / (e2 - e1)
    p = m0 - q
    assert abs(p * cmath.exp(-2.5 * g1) + q * cmath.exp(-2.5 * g2) - m2) < 1e-8 * abs(m0)
    late = cmath.exp(-1j * omega * traj.u0) * (p / (g1 + 1j * omega) + q / (g2 + 1j * omega))
    return early + middle + late


@pytest.fixture
def two_unit_collapse():
    return CollapseTrajectory(1.0, 2.0)


@pytest.mark.slow
def test_semi_numeric_matches_direct_overlap(two_unit_collapse):
    traj, alpha, omega, omega_prime = two_unit_collapse, 1.0, 1.0, 5.0
    rates = (alpha * traj.sqrt_A, 1j * omega_prime * traj.A)
    overlap = overlap_by_quadrature(lambda u: mode_refl_scalar(traj, alpha, omega_prime, u),
                                    traj, omega, omega_prime, rates)
    direct = -math.sqrt(omega / math.pi) * overlap
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        beta = beta_rr_semi_numeric(traj, alpha, omega, omega_prime)
    assert abs(beta.value - direct) < 1e-6 * abs(direct)
    assert beta.modulus_sq == pytest.approx(2.28e-6, rel=0.02)


@pytest.mark.slow
def test_rl_matches_direct_overlap(two_unit_collapse):
    traj, alpha, omega, omega_prime = two_unit_collapse, 1.0, 1.0, 5.0
    rates = (alpha * traj.sqrt_A, 1j * omega_prime)
    overlap = overlap_by_quadrature(lambda u: mode_trans_scalar(traj, alpha, omega_prime, u),
                                    traj, omega, omega_prime, rates)
    direct = -math.sqrt(omega / math.pi) * overlap
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        beta = beta_rl_semi_numeric(traj, alpha, omega, omega_prime)
    assert abs(beta.value - direct) < 1e-6 * abs(direct)


def test_large_coupling_on_short_collapse():
    traj = CollapseTrajectory(1.0, 3.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        semi = beta_rr_semi_numeric(traj, 1e4, 1.0, 10.0).modulus_sq
        perfect = beta_rr_perfect_numeric(traj, 1.0, 10.0).modulus_sq
    assert semi == pytest.approx(perfect, rel=0.02)


def test_rl_with_large_coupling(collapse):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        rl = beta_rl_semi_numeric(collapse, 1e4, 1.0, 10.0)
        rr = beta_rr_semi_numeric(collapse, 1e4, 1.0, 10.0)
    assert math.isfinite(rl.modulus_sq)
    assert rl.modulus_sq < 1e-2 * rr.modulus_sq


@pytest.mark.slow
@pytest.mark.parametrize("omega", [0.5, 1.0])
@pytest.mark.parametrize("omega_prime", [100.0, 200.0])
def test_reflection_channel_dominates(collapse, omega, omega_prime):
    rr = beta_rr_semi_numeric(collapse, 1.0, omega, omega_prime).modulus_sq
    rl = beta_rl_semi_numeric(collapse, 1.0, omega, omega_prime).modulus_sq
    assert rl < 1e-2 * rr


def test_semi_numeric_on_eternal_collapse(eternal):
    beta = beta_rr_semi_numeric(eternal, 1.0, 1.0, 100.0)
    assert beta.modulus_sq == pytest.approx(fermi_semi_beta_sq(1.0, 1.0, 1.0, 100.0), rel=0.10)
