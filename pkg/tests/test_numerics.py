"""Gamma function, decay kernel, and quadrature primitives."""

import math

import numpy as np
import pytest

import oracles
from qdephase import (
    ConvergenceError,
    DomainError,
    KernelArgs,
    QuadratureSettings,
    decay_kernel,
    gamma,
    integrate_semi_infinite,
    kernel_by_quadrature,
    oscillatory_moment,
    total_moment,
)
from qdephase.numerics import SMALL_EXPONENT_LIMIT


class TestGamma:
    def test_gamma_one(self):
        assert gamma(1.0) == pytest.approx(1.0, rel=1e-14)

    def test_gamma_half_is_sqrt_pi(self):
        assert gamma(0.5) == pytest.approx(oracles.SQRT_PI, rel=1e-13)

    def test_small_argument_against_series_oracle(self):
        # recurrence Gamma(0.05) = Gamma(1.05)/0.05 with the series value
        assert oracles.series_gamma(1.05) == pytest.approx(oracles.GAMMA_1_05, rel=1e-13)
        assert gamma(0.05) == pytest.approx(oracles.GAMMA_1_05 / 0.05, rel=1e-13)
        assert gamma(0.05) == pytest.approx(oracles.GAMMA_0_05, rel=1e-13)

    @pytest.mark.parametrize("x", [0.01, 0.03, 0.05])
    def test_frozen_values(self, x):
        frozen = {0.01: oracles.GAMMA_0_01, 0.03: oracles.GAMMA_0_03, 0.05: oracles.GAMMA_0_05}
        assert gamma(x) == pytest.approx(frozen[x], rel=1e-13)

    def test_accuracy_against_series_over_domain(self):
        rng = np.random.default_rng(101)
        for x in np.concatenate([rng.uniform(1e-3, 50.0, 300), [1e-4, 0.5, 1.0, 2.0, 50.0]]):
            assert gamma(float(x)) == pytest.approx(oracles.series_gamma(float(x)), rel=1e-13)

    def test_recurrence_property(self):
        rng = np.random.default_rng(7)
        for x in rng.uniform(0.01, 10.0, 1000):
            lhs = gamma(float(x) + 1.0)
            rhs = float(x) * gamma(float(x))
            assert abs(lhs - rhs) <= 1e-12 * lhs

    @pytest.mark.parametrize("bad", [0.0, -1.0, -0.5, math.nan, math.inf])
    def test_domain_errors(self, bad):
        with pytest.raises(DomainError):
            gamma(bad)


class TestDecayKernel:
    def test_zero_time_is_zero(self):
        for c in (0.0, 0.3, 1.0):
            assert decay_kernel(KernelArgs(c, 0.5, 1.0, 0.0)) == 0.0

    def test_reference_value_against_quadrature_oracle(self):
        oracle = oracles.quad_kernel(1.0, 0.5, 1.0, 1.0)
        assert oracle == pytest.approx(oracles.KERNEL_HALF_AT_1, rel=1e-10)
        assert decay_kernel(KernelArgs(1.0, 0.5, 1.0, 1.0)) == pytest.approx(oracle, rel=1e-10)

    def test_zero_exponent_limit(self):
        # Frullani-type limit (c/2) ln(1 + (omega_c t)^2)
        value = decay_kernel(KernelArgs(1.0, 0.0, 1.0, 1.0))
        assert value == pytest.approx(0.5 * math.log(2.0), rel=1e-14)

    def test_small_exponent_continuity(self):
        limit = 0.5 * math.log1p(4.0**2)
        value = decay_kernel(KernelArgs(1.0, 1e-4, 1.0, 4.0))
        assert value == pytest.approx(limit, rel=1e-3)

    def test_branches_agree_at_the_switch(self):
        p = SMALL_EXPONENT_LIMIT * 1.0001
        for t in (0.3, 1.0, 20.0):
            exact = decay_kernel(KernelArgs(1.0, p, 1.0, t))
            limit = 0.5 * math.log1p(t * t)
            assert exact == pytest.approx(limit, rel=1e-6)

    def test_monotone_in_time_for_small_exponents(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            c = 10.0 ** rng.uniform(-3, 0)
            p = rng.uniform(1e-3, 1.0)
            wc = rng.uniform(0.5, 2.0)
            times = np.linspace(0.0, 50.0, 200)
            values = [decay_kernel(KernelArgs(c, p, wc, float(t))) for t in times]
            assert all(b >= a - 1e-14 for a, b in zip(values, values[1:]))

    def test_long_time_saturation(self):
        # the approach to c*Gamma(p)*omega_c**p goes as (omega_c*t)**(-p),
        # so a 1e-4 check at t = 1e6 needs p >= 0.7 or so
        rng = np.random.default_rng(6)
        for _ in range(20):
            c = 10.0 ** rng.uniform(-3, 0)
            p = rng.uniform(0.7, 2.0)
            wc = rng.uniform(0.5, 2.0)
            limit = c * gamma(p) * wc**p
            value = decay_kernel(KernelArgs(c, p, wc, 1e6 / wc))
            assert value == pytest.approx(limit, rel=1e-4)

    def test_negative_exponent_refused(self):
        with pytest.raises(DomainError, match="quadrature"):
            decay_kernel(KernelArgs(1.0, -0.5, 1.0, 1.0))

    def test_exponent_below_minus_one_rejected(self):
        with pytest.raises(DomainError):
            KernelArgs(1.0, -1.5, 1.0, 1.0)

    @pytest.mark.parametrize("field,value", [("c", -1.0), ("omega_c", 0.0), ("t", -1.0)])
    def test_kernel_args_validation(self, field, value):
        kwargs = {"c": 1.0, "p": 0.5, "omega_c": 1.0, "t": 1.0, field: value}
        with pytest.raises(DomainError):
            KernelArgs(**kwargs)


class TestKernelOracleEquivalence:
    def test_closed_form_matches_quadrature_on_random_grid(self):
        rng = np.random.default_rng(42)
        worst = 0.0
        for i in range(100):
            c = 10.0 ** rng.uniform(-4, 0)
            p = rng.uniform(1e-3, 2.0)
            wc = rng.uniform(0.5, 2.0)
            t = 0.0 if i % 20 == 0 else rng.uniform(0.0, 100.0)
            args = KernelArgs(c, p, wc, t)
            closed = decay_kernel(args)
            oracle = kernel_by_quadrature(args)
            err = abs(closed - oracle) / max(1e-8, 1e-6 * abs(closed))
            worst = max(worst, err)
        assert worst <= 1.0

    def test_agreement_at_extreme_times(self):
        for (c, p, t) in [(0.01, 0.01, 1e6), (1.0, 0.5, 1e6), (0.5, 1.7, 1e4), (1.0, 0.03, 1e5)]:
            args = KernelArgs(c, p, 1.0, t)
            closed = decay_kernel(args)
            oracle = kernel_by_quadrature(args)
            assert oracle == pytest.approx(closed, rel=1e-7)

    def test_quadrature_serves_negative_exponents(self):
        # ohmic point p = 0: the kernel is exactly (c/2) ln(1 + (wc t)^2)
        for t in (0.5, 3.0, 40.0):
            value = kernel_by_quadrature(KernelArgs(1.0, 0.0, 1.0, t))
            assert value == pytest.approx(0.5 * math.log1p(t * t), rel=1e-8)
        # p in (-1, 0): finite pointwise; direct and split routes agree
        for p in (-0.3, -0.7):
            near = kernel_by_quadrature(KernelArgs(1.0, p, 1.0, 3.9))
            far = kernel_by_quadrature(KernelArgs(1.0, p, 1.0, 4.1))
            assert far > near > 0.0
            direct = oracles.quad_kernel(1.0, p, 1.0, 4.1)
            assert far == pytest.approx(direct, rel=1e-7)


class TestMoments:
    def test_total_moment_against_series_gamma(self):
        for (c, p, wc) in [(1.0, 0.01, 1.0), (0.05, 0.05, 1.0), (0.3, 1.5, 2.0)]:
            expected = c * oracles.series_gamma(p) * wc**p
            assert total_moment(c, p, wc) == pytest.approx(expected, rel=1e-9)

    def test_total_moment_rejects_divergent_exponent(self):
        with pytest.raises(DomainError):
            total_moment(1.0, 0.0, 1.0)

    def test_sine_moment_against_direct_quadrature(self):
        for (c, p, t) in [(1.0, 0.03, 1.0), (0.5, 0.9, 2.5), (1.0, 1.4, 0.7)]:
            expected = oracles.quad_sine(c, p, 1.0, t)
            assert oscillatory_moment(c, p, 1.0, t, "sin") == pytest.approx(expected, rel=1e-8)

    def test_sine_moment_zero_time(self):
        assert oscillatory_moment(1.0, 0.5, 1.0, 0.0, "sin") == 0.0

    def test_cosine_moment_zero_time_equals_total(self):
        total = total_moment(1.0, 0.5, 1.0)
        assert oscillatory_moment(1.0, 0.5, 1.0, 0.0, "cos") == pytest.approx(total, rel=1e-12)

    def test_cosine_moment_rejects_nonpositive_exponent(self):
        with pytest.raises(DomainError):
            oscillatory_moment(1.0, 0.0, 1.0, 1.0, "cos")

    def test_unknown_kind_rejected(self):
        with pytest.raises(DomainError):
            oscillatory_moment(1.0, 0.5, 1.0, 1.0, "tan")


class TestIntegrateSemiInfinite:
    def test_exponential(self):
        assert integrate_semi_infinite(lambda w: math.exp(-w)) == pytest.approx(1.0, rel=1e-10)

    def test_damped_sine(self):
        value = integrate_semi_infinite(lambda w: math.exp(-w) * math.sin(w))
        assert value == pytest.approx(0.5, rel=1e-10)

    def test_endpoint_singularity(self):
        value = integrate_semi_infinite(lambda w: w**-0.99 * math.exp(-w))
        assert value == pytest.approx(oracles.GAMMA_0_01, rel=1e-8)

    def test_nonconvergence_raises(self):
        settings = QuadratureSettings(abs_tol=1e-14, rel_tol=1e-14, max_subdivisions=2)
        with pytest.raises(ConvergenceError, match="estimate"):
            integrate_semi_infinite(
                lambda w: math.cos(37.0 * w) * math.exp(-0.01 * w), settings
            )

    def test_bad_scale_rejected(self):
        with pytest.raises(DomainError):
            integrate_semi_infinite(lambda w: math.exp(-w), scale=0.0)


class TestQuadratureSettings:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"abs_tol": 0.0},
            {"rel_tol": -1.0},
            {"max_subdivisions": 0},
            {"tail_cut_multiplier": 5.0},
        ],
    )
    def test_invalid_settings(self, kwargs):
        with pytest.raises(DomainError):
            QuadratureSettings(**kwargs)

    def test_defaults(self):
        s = QuadratureSettings()
        assert s.abs_tol == 1e-10
        assert s.rel_tol == 1e-8
        assert s.max_subdivisions == 2000
        assert s.tail_cut_multiplier == 200.0
