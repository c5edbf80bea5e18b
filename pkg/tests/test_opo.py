"""Threshold, loss model, escape efficiency and gain checks."""
import math

import numpy as np
import pytest
from scipy.optimize import brentq

from sqzlab import (
    AboveThresholdError,
    EffectiveNonlinearity,
    LossModel,
    ModelValidityError,
    NoGainError,
    SolverError,
    cavity_bandwidth,
    escape_efficiency,
    fit_loss_model,
    loss_at_pump,
    optimize_coupler,
    oscillation_threshold,
    parametric_gain,
    pump_power_at_x,
    threshold_from_gain,
)

C0 = 299792458.0


def threshold_quadratic(t, enl, l0, a):
    # closed-form oracle: 4*E*P = (T + L0 + a*P)^2 solved for the
    # physical (smaller) root
    aa = a * a
    bb = 2.0 * a * (t + l0) - 4.0 * enl
    cc = (t + l0) ** 2
    if aa == 0.0:
        return -cc / bb
    disc = bb * bb - 4.0 * aa * cc
    return (-bb - math.sqrt(disc)) / (2.0 * aa)


def threshold_bisect(t, enl, l0, a):
    # second independent route
    def resid(p):
        return (t + l0 + a * p) ** 2 / (4.0 * enl) - p

    hi = (t + l0) ** 2 / (4.0 * enl)
    while resid(hi) > 0.0:
        hi *= 2.0
        if hi > 1e9:
            raise RuntimeError("no bracket")
    return brentq(resid, 0.0, hi, xtol=1e-15, rtol=1e-15)


LOSS = LossModel(L0=0.01236, a=0.0246)
ENL = EffectiveNonlinearity(0.043)


class TestLossModel:
    def test_affine_law(self):
        assert loss_at_pump(LOSS, 0.0) == pytest.approx(0.01236, abs=1e-12)
        assert loss_at_pump(LOSS, 0.2) == pytest.approx(0.01728, abs=1e-12)
        assert loss_at_pump(LOSS, 0.35) == pytest.approx(0.02097, abs=1e-12)

    def test_unphysical_total_rejected(self):
        steep = LossModel(L0=0.5, a=2.0)
        with pytest.raises(ModelValidityError):
            loss_at_pump(steep, 0.3)

    def test_negative_pump_rejected(self):
        with pytest.raises(ValueError):
            loss_at_pump(LOSS, -0.1)

    def test_field_validation(self):
        with pytest.raises(ValueError):
            LossModel(L0=-0.01, a=0.02)
        with pytest.raises(ValueError):
            LossModel(L0=1.0, a=0.0)
        with pytest.raises(ValueError):
            LossModel(L0=0.01, a=-0.1)


class TestFitLossModel:
    def test_exact_two_point(self):
        fit = fit_loss_model([(0.0, 0.01236), (0.2, 0.01728)])
        assert fit.L0 == pytest.approx(0.01236, abs=1e-12)
        assert fit.a == pytest.approx(0.0246, abs=1e-10)

    def test_least_squares_slope(self):
        fit = fit_loss_model([(0.0, 0.011), (0.35, 0.022)])
        assert fit.L0 == pytest.approx(0.011, abs=1e-12)
        assert fit.a == pytest.approx(0.011 / 0.35, rel=1e-9)

    def test_overdetermined_fit(self):
        # exact line recovered from three collinear samples
        fit = fit_loss_model([(0.0, 0.01), (0.1, 0.013), (0.2, 0.016)])
        assert fit.L0 == pytest.approx(0.01, abs=1e-12)
        assert fit.a == pytest.approx(0.03, rel=1e-9)

    def test_rejects_degenerate_inputs(self):
        with pytest.raises(ValueError):
            fit_loss_model([(0.2, 0.017)])
        with pytest.raises(ValueError):
            fit_loss_model([(0.2, 0.017), (0.2, 0.018)])


class TestThreshold:
    def test_frozen_values(self):
        p_alt = oscillation_threshold(0.113, ENL, LOSS)
        p_ref = oscillation_threshold(0.21, ENL, LOSS)
        assert p_alt == pytest.approx(0.094797992335, rel=1e-9)
        assert p_ref == pytest.approx(0.307346134563, rel=1e-9)

    def test_agrees_with_quadratic_oracle(self):
        for t in (0.05, 0.113, 0.21, 0.3, 0.4):
            expected = threshold_quadratic(t, ENL.value, LOSS.L0, LOSS.a)
            assert oscillation_threshold(t, ENL, LOSS) == pytest.approx(
                expected, rel=1e-11
            )

    def test_agrees_with_bisection_oracle(self):
        for t in (0.08, 0.21, 0.35):
            expected = threshold_bisect(t, ENL.value, LOSS.L0, LOSS.a)
            assert oscillation_threshold(t, ENL, LOSS) == pytest.approx(
                expected, rel=1e-11
            )

    def test_residual_contract(self):
        p = oscillation_threshold(0.21, ENL, LOSS)
        resid = (0.21 + loss_at_pump(LOSS, p)) ** 2 / (4.0 * ENL.value) - p
        assert abs(resid) <= 1e-9 * p

    def test_guess_independent(self):
        base = oscillation_threshold(0.21, ENL, LOSS)
        hi = 10.0 * 0.21**2 / (4.0 * ENL.value)
        for p0 in (0.0, 1e-6, 0.1, base, 2 * base, hi):
            assert oscillation_threshold(0.21, ENL, LOSS, p_init=p0) == pytest.approx(
                base, rel=1e-9
            )

    def test_pump_independent_loss_closed_form(self):
        flat = LossModel(L0=0.02, a=0.0)
        expected = (0.21 + 0.02) ** 2 / (4.0 * ENL.value)
        assert oscillation_threshold(0.21, ENL, flat) == pytest.approx(
            expected, rel=1e-12
        )

    def test_monotone_in_coupler(self):
        grid = np.arange(0.05, 0.4001, 0.001)
        values = [oscillation_threshold(t, ENL, LOSS) for t in grid]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_runaway_absorption_rejected(self):
        # loss grows faster than conversion can ever catch up
        weak = EffectiveNonlinearity(1e-4)
        steep = LossModel(L0=0.01, a=0.5)
        with pytest.raises(SolverError):
            oscillation_threshold(0.21, weak, steep)

    def test_bad_coupler_rejected(self):
        with pytest.raises(ValueError):
            oscillation_threshold(0.0, ENL, LOSS)
        with pytest.raises(ValueError):
            oscillation_threshold(1.0, ENL, LOSS)


class TestEscapeEfficiency:
    def test_frozen_values(self):
        assert escape_efficiency(0.21, 0.2, LOSS) == pytest.approx(
            0.923970432946, rel=1e-9
        )
        assert escape_efficiency(0.21, 0.0, LOSS) == pytest.approx(
            0.944414463033, rel=1e-9
        )

    def test_definition(self):
        t, p = 0.3, 0.15
        l_p = loss_at_pump(LOSS, p)
        assert escape_efficiency(t, p, LOSS) == pytest.approx(
            t / (t + l_p), rel=1e-12
        )

    def test_decreasing_in_pump(self):
        values = [escape_efficiency(0.21, p, LOSS) for p in (0.0, 0.1, 0.2, 0.3)]
        assert all(b < a for a, b in zip(values, values[1:]))


class TestPumpPowerAtX:
    def test_quadratic_in_x(self):
        p_th = oscillation_threshold(0.21, ENL, LOSS)
        assert pump_power_at_x(0.0, 0.21, ENL, LOSS) == 0.0
        assert pump_power_at_x(1.0, 0.21, ENL, LOSS) == pytest.approx(
            p_th, rel=1e-12
        )
        assert pump_power_at_x(0.7, 0.21, ENL, LOSS) == pytest.approx(
            0.49 * p_th, rel=1e-12
        )
        assert pump_power_at_x(0.7, 0.21, ENL, LOSS) == pytest.approx(
            0.150599605936, rel=1e-9
        )

    def test_domain(self):
        with pytest.raises(ValueError):
            pump_power_at_x(-0.1, 0.21, ENL, LOSS)
        with pytest.raises(ValueError):
            pump_power_at_x(0.5, 0.0, ENL, LOSS)


class TestOptimizeCoupler:
    def test_interior_optimum_at_threshold_drive(self):
        t_opt, rho = optimize_coupler(1.0, ENL, LOSS, (0.05, 0.4))
        assert t_opt == pytest.approx(0.269251951, abs=1e-6)
        assert rho == pytest.approx(0.915910346847, rel=1e-8)

    def test_zero_drive_pushes_to_upper_end(self):
        # with no pump-induced loss growth the escape efficiency is
        # monotone in T, so the boundary wins
        t_opt, rho = optimize_coupler(0.0, ENL, LOSS, (0.05, 0.4))
        assert t_opt == pytest.approx(0.4, abs=1e-12)
        assert rho == pytest.approx(0.4 / (0.4 + LOSS.L0), rel=1e-12)

    def test_flat_loss_pushes_to_upper_end(self):
        flat = LossModel(L0=0.01236, a=0.0)
        t_opt, _ = optimize_coupler(1.0, ENL, flat, (0.05, 0.4))
        assert t_opt == pytest.approx(0.4, abs=1e-12)

    def test_optimum_beats_neighbors(self):
        t_opt, rho = optimize_coupler(1.0, ENL, LOSS, (0.05, 0.4))
        for t in (t_opt - 0.01, t_opt + 0.01):
            p = pump_power_at_x(1.0, t, ENL, LOSS)
            assert escape_efficiency(t, p, LOSS) <= rho + 1e-12

    def test_bad_range(self):
        with pytest.raises(ValueError):
            optimize_coupler(1.0, ENL, LOSS, (0.4, 0.05))


class TestParametricGain:
    def test_frozen_values(self):
        g_amp, g_de = parametric_gain(0.728)
        assert g_amp == pytest.approx(13.516436, abs=1e-5)
        assert g_de == pytest.approx(0.334898, abs=1e-5)

    def test_zero_drive(self):
        assert parametric_gain(0.0) == (1.0, 1.0)

    def test_product_exceeds_one(self):
        # amplification and deamplification are not reciprocal:
        # G+ * G- = 1 / (1 - x^2)^2 > 1
        for x in (0.1, 0.5, 0.9):
            g_amp, g_de = parametric_gain(x)
            assert g_amp * g_de == pytest.approx(
                1.0 / (1.0 - x * x) ** 2, rel=1e-12
            )
            assert g_amp * g_de > 1.0

    def test_monotone(self):
        xs = np.linspace(0.0, 0.99, 100)
        amps = [parametric_gain(x)[0] for x in xs]
        des = [parametric_gain(x)[1] for x in xs]
        assert all(b > a for a, b in zip(amps, amps[1:]))
        assert all(b < a for a, b in zip(des, des[1:]))

    def test_domain_errors(self):
        with pytest.raises(AboveThresholdError):
            parametric_gain(1.0)
        with pytest.raises(AboveThresholdError):
            parametric_gain(1.5)
        with pytest.raises(ValueError):
            parametric_gain(-0.2)


class TestThresholdFromGain:
    def test_known_point(self):
        # G = 4 means x = 1/2, so P = P_th / 4
        assert threshold_from_gain(4.0, 0.0275) == pytest.approx(0.110, rel=1e-12)

    def test_inverse_of_gain(self):
        p_th = 0.31
        for x in (0.1, 0.5, 0.728, 0.9):
            p = x * x * p_th
            g_amp, _ = parametric_gain(x)
            assert threshold_from_gain(g_amp, p) == pytest.approx(p_th, rel=1e-12)

    def test_no_gain_rejected(self):
        with pytest.raises(NoGainError):
            threshold_from_gain(1.0, 0.1)
        with pytest.raises(NoGainError):
            threshold_from_gain(0.8, 0.1)
        with pytest.raises(ValueError):
            threshold_from_gain(4.0, -0.1)


class TestCavityBandwidth:
    def test_frozen_value(self):
        gamma = cavity_bandwidth(0.21, 0.017, 0.5)
        assert gamma == pytest.approx(C0 * 0.227, rel=1e-12)
        assert gamma == pytest.approx(68052887.966, abs=1e-2)

    def test_scales_inverse_with_length(self):
        assert cavity_bandwidth(0.21, 0.017, 1.0) == pytest.approx(
            0.5 * cavity_bandwidth(0.21, 0.017, 0.5), rel=1e-12
        )

    def test_normalized_frequency_anchor(self):
        gamma = cavity_bandwidth(0.21, 0.017, 0.5)
        omega = 2.0 * math.pi * 2e6
        assert (omega / gamma) ** 2 == pytest.approx(0.034098, abs=1e-5)

    def test_domain(self):
        with pytest.raises(ValueError):
            cavity_bandwidth(0.0, 0.0, 0.5)
        with pytest.raises(ValueError):
            cavity_bandwidth(0.6, 0.5, 0.5)
        with pytest.raises(ValueError):
            cavity_bandwidth(0.21, 0.017, 0.0)
