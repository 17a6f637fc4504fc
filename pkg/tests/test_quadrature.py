"""Tests for the adaptive Gauss-Kronrod integrator."""

import math

import numpy as np
import pytest

from decaylab.quadrature import QuadResult, gauss_kronrod_15, integrate_adaptive


class TestPanelRule:
    def test_polynomial_exactness(self):
        # The 15-point Kronrod rule integrates x^10 on [0,1] exactly.
        val, err = gauss_kronrod_15(lambda x: x**10, 0.0, 1.0)
        assert val == pytest.approx(1.0 / 11.0, rel=1e-14)
        assert err <= 1e-12

    def test_interval_scaling(self):
        val, _ = gauss_kronrod_15(math.sin, 0.0, math.pi)
        assert val == pytest.approx(2.0, rel=1e-10)


class TestAdaptive:
    def test_simple_integrals(self):
        r = integrate_adaptive(lambda x: x * x, 0.0, 1.0, rel_tol=1e-12)
        assert r.converged
        assert r.value == pytest.approx(1.0 / 3.0, rel=1e-12)
        r = integrate_adaptive(math.sin, 0.0, math.pi, rel_tol=1e-12)
        assert r.value == pytest.approx(2.0, rel=1e-12)

    def test_breakpoint_handles_kink(self):
        r = integrate_adaptive(
            lambda x: abs(x - 1.0), 0.0, 2.0, rel_tol=1e-12, breakpoints=(1.0,)
        )
        assert r.converged
        assert r.value == pytest.approx(1.0, rel=1e-13)

    def test_error_estimate_is_honest(self):
        for f, a, b, exact in [
            (lambda x: math.sqrt(x), 0.0, 1.0, 2.0 / 3.0),
            (lambda x: math.exp(-x), 0.0, 30.0, 1.0 - math.exp(-30.0)),
            (lambda x: 1.0 / (1.0 + x * x), 0.0, 50.0, math.atan(50.0)),
        ]:
            r = integrate_adaptive(f, a, b, rel_tol=1e-9)
            assert abs(r.value - exact) <= max(r.error, 1e-13 * abs(exact))

    def test_rel_tol_is_respected(self):
        exact = math.e - 1.0
        for tol in [1e-6, 1e-10]:
            r = integrate_adaptive(math.exp, 0.0, 1.0, rel_tol=tol)
            assert r.converged
            assert abs(r.value - exact) <= tol * exact

    def test_sharp_peak_with_bracketing_breakpoints(self):
        # Narrow Gaussian inside a wide interval; the peak must be bracketed
        # by breakpoints, as the norm integrals do for their features.
        f = lambda x: math.exp(-((x - 0.7) ** 2) / 1e-6)
        exact = math.sqrt(math.pi * 1e-6)
        r = integrate_adaptive(
            f, 0.0, 100.0, rel_tol=1e-8, breakpoints=(0.69, 0.7, 0.71)
        )
        assert r.converged
        assert r.value == pytest.approx(exact, rel=1e-7)

    def test_non_convergence_is_reported(self):
        # An endpoint singularity cannot be resolved in three bisections.
        f = lambda x: x**-0.5
        r = integrate_adaptive(f, 0.0, 1.0, rel_tol=1e-12, max_depth=3)
        assert isinstance(r, QuadResult)
        assert not r.converged
        assert r.error > 1e-12 * abs(r.value)

    def test_zero_length_interval(self):
        r = integrate_adaptive(math.exp, 2.0, 2.0)
        assert r.value == 0.0
        assert r.converged

    def test_deterministic(self):
        f = lambda x: math.cos(3.0 * x) / (1.0 + x)
        r1 = integrate_adaptive(f, 0.0, 20.0, rel_tol=1e-10)
        r2 = integrate_adaptive(f, 0.0, 20.0, rel_tol=1e-10)
        assert r1.value == r2.value and r1.error == r2.error
