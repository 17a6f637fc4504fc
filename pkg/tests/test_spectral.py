"""Tests for spectral models and exact norms on them.

All operators here are normal with known point spectrum, so every operator
norm is a supremum of explicit scalar quantities over the spectrum — which
makes closed-form oracles available for single-point models.
"""

import math

import numpy as np
import pytest

from decaylab.spectral import (
    ParamSeq,
    SpectrumModel,
    cayley_product_norm,
    cayley_product_sweep,
    frac_normalize_residual,
    fractional_power_norm,
    inverse_gen_norm,
    make_poly_stable_spectrum,
    make_sqrt_spectrum,
    plancherel_check,
    semigroup_norm,
    splitmix64_floats,
    splitmix64_values,
    weighted_resolvent_sup,
)


def _ref_splitmix64(seed, count):
    """Independent pure-Python reference implementation."""
    mask = (1 << 64) - 1
    out = []
    state = seed & mask
    for _ in range(count):
        state = (state + 0x9E3779B97F4A7C15) & mask
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
        out.append(z ^ (z >> 31))
    return out


class TestDeterministicRandomness:
    def test_known_first_values_for_seed_zero(self):
        vals = splitmix64_values(0, 3)
        assert vals[0] == 0xE220A8397B1DCDAF
        assert vals[1] == 0x6E789E6AA1B965F4
        assert vals[2] == 0x06C45D188009454F

    def test_matches_reference_for_many_seeds(self):
        for seed in (0, 1, 2, 12345, 2**63, 2**64 - 1):
            assert list(splitmix64_values(seed, 16)) == _ref_splitmix64(seed, 16)

    def test_floats_in_unit_interval(self):
        f = splitmix64_floats(7, 1000)
        assert f.shape == (1000,)
        assert np.all((f >= 0.0) & (f < 1.0))
        ref = _ref_splitmix64(7, 3)
        assert f[0] == pytest.approx((ref[0] >> 11) * 2.0**-53, abs=0.0)

    def test_param_seq_range_and_determinism(self):
        seq = ParamSeq(seed=42, lo=0.5, hi=2.0)
        a = seq.values(256)
        b = ParamSeq(seed=42, lo=0.5, hi=2.0).values(256)
        assert np.array_equal(a, b)
        assert np.all((a >= 0.5) & (a <= 2.0))
        assert not np.array_equal(a[:128], a[128:])


class TestSpectrumModel:
    def test_poly_stable_example(self):
        m = make_poly_stable_spectrum(beta=1.0, K=3)
        expect = np.array([1.0 + 1.0j, 0.5 + 2.0j, 1.0 / 3.0 + 3.0j])
        assert np.allclose(m.points, expect, rtol=1e-15)
        assert m.K == 3
        assert m.beta == 1.0

    def test_sqrt_example(self):
        m = make_sqrt_spectrum(c=1.0, K=4)
        assert np.allclose(m.points, 1.0 + 1.0j * np.sqrt(np.arange(1.0, 5.0)))

    def test_rejects_left_halfplane(self):
        with pytest.raises(ValueError):
            SpectrumModel(re=np.array([-1.0]), im=np.array([0.0]))

    def test_from_points_folds_conjugates(self):
        m = SpectrumModel.from_points([1.0 + 2.0j, 1.0 - 2.0j, 3.0 + 0.0j])
        assert np.all(m.im >= 0.0)
        assert m.K == 3

    def test_text_round_trip(self, tmp_path):
        m = make_poly_stable_spectrum(beta=2.0, K=17, c_im=0.75)
        text = m.to_text()
        back = SpectrumModel.from_text(text)
        assert np.array_equal(back.re, m.re)
        assert np.array_equal(back.im, m.im)
        assert back.beta == m.beta
        assert back.c_im == m.c_im
        assert back.label == m.label


class TestPointOracles:
    def test_cayley_single_point(self):
        m = SpectrumModel.from_points([2.0 + 0.0j])
        assert cayley_product_norm(m, 1.0, 1) == pytest.approx(1.0 / 3.0, rel=1e-14)

    def test_cayley_with_fractional_part(self):
        m = SpectrumModel.from_points([2.0 + 0.0j])
        got = cayley_product_norm(m, 1.0, 2, alpha=1.0)
        assert got == pytest.approx((1.0 / 3.0) ** 2 / 2.0, rel=1e-14)

    def test_cayley_return_index(self):
        m = make_sqrt_spectrum(c=1.0, K=100)
        value, idx = cayley_product_norm(m, 1.0, 4, return_index=True)
        assert value == pytest.approx(
            np.max(np.abs((m.points - 1.0) / (m.points + 1.0)) ** 4), rel=1e-12
        )
        assert 0 <= idx < m.K

    def test_semigroup_single_point(self):
        m = SpectrumModel.from_points([2.0 + 0.0j])
        assert semigroup_norm(m, 1.0, 1.0) == pytest.approx(
            math.exp(-2.0) / 2.0, rel=1e-14
        )

    def test_inverse_gen_single_point(self):
        m = SpectrumModel.from_points([1.0 + 1.0j])
        assert inverse_gen_norm(m, 2.0, 0.0) == pytest.approx(
            math.exp(-1.0), rel=1e-14
        )

    def test_fractional_power_single_point(self):
        m = SpectrumModel.from_points([1.0 + 2.0j])
        assert fractional_power_norm(m, 2.0) == pytest.approx(0.2, rel=1e-14)


class TestFracNormalize:
    def test_residual_is_tiny(self):
        m = make_poly_stable_spectrum(beta=1.0, K=1000)
        for alpha, c in [(0.5, 1.0), (1.0, 0.3), (2.0, 2.5), (1.7, 0.01)]:
            assert frac_normalize_residual(m, alpha, c) < 1e-12

    def test_randomized_residuals(self):
        u = splitmix64_floats(2024, 300).reshape(100, 3)
        for row in u:
            lam = complex(0.05 + 5.0 * row[0], -3.0 + 6.0 * row[1])
            m = SpectrumModel.from_points([lam])
            alpha = 0.25 + 2.0 * row[2]
            assert frac_normalize_residual(m, alpha, 0.5) < 1e-10


class TestPlancherel:
    def test_exact_half_pi(self):
        lhs, rhs, residual = plancherel_check(1.0 + 0.0j, 1.0, 0.0)
        assert lhs == pytest.approx(math.pi / 2.0, rel=1e-9)
        assert rhs == pytest.approx(math.pi / 2.0, rel=1e-9)
        assert residual < 1e-8

    def test_exact_pi_over_ten(self):
        lhs, rhs, residual = plancherel_check(2.0 + 0.0j, 0.5, 1.0)
        assert lhs == pytest.approx(math.pi / 10.0, rel=1e-9)
        assert residual < 1e-8

    def test_complex_point(self):
        lhs, rhs, residual = plancherel_check(1.5 + 2.5j, 0.7, 0.5)
        assert residual < 1e-8


class TestWeightedResolvent:
    def test_single_point_oracle(self):
        m = SpectrumModel.from_points([1.0 + 0.0j])
        value, xi_at = weighted_resolvent_sup(m, 0.25, 0.0)
        assert value == pytest.approx(math.pi / 2.0, rel=1e-6)
        assert xi_at == pytest.approx(1.0, rel=0.05)

    def test_weight_makes_sup_finite(self):
        m = make_poly_stable_spectrum(beta=1.0, K=500)
        value, _ = weighted_resolvent_sup(m, 0.3, 0.3)
        assert math.isfinite(value) and value > 0.0


class TestSweep:
    def test_matches_full_scan_on_medium_model(self):
        m = make_sqrt_spectrum(c=1.0, K=20000)
        omegas = ParamSeq(seed=3, lo=0.5, hi=2.0)
        ns = [4, 16, 64, 256, 1024]
        sweep = cayley_product_sweep(m, omegas, ns, alpha=1.0)
        w = omegas.values(max(ns))
        pts = m.points
        acc = np.zeros(m.K)
        checked = 0
        for k, om in enumerate(w, start=1):
            acc += np.log(np.abs((pts - om) / (pts + om)))
            if k in ns:
                full = np.max(acc - 1.0 * np.log(np.abs(pts)))
                got = sweep.values[ns.index(k)]
                assert math.log(got) == pytest.approx(full, abs=1e-9)
                checked += 1
        assert checked == len(ns)

    def test_constant_omega_matches_product_norm(self):
        m = make_sqrt_spectrum(c=1.0, K=5000)
        ns = [8, 32, 128]
        sweep = cayley_product_sweep(m, 1.0, ns, alpha=0.5)
        for n, v in zip(sweep.ns, sweep.values):
            assert v == pytest.approx(
                cayley_product_norm(m, 1.0, n, alpha=0.5), rel=1e-10
            )

    def test_attaining_indices_reported(self):
        m = make_sqrt_spectrum(c=1.0, K=5000)
        sweep = cayley_product_sweep(m, 1.0, [16, 64], alpha=1.0)
        assert len(sweep.indices) == 2
        for idx in sweep.indices:
            assert 0 <= idx < m.K


class TestTruncationStability:
    def test_poly_model_norms_stabilize_in_K(self):
        t, alpha = 100.0, 1.0
        prev = None
        for K in (10_000, 20_000, 40_000):
            m = make_poly_stable_spectrum(beta=1.0, K=K)
            v = inverse_gen_norm(m, t, alpha)
            if prev is not None:
                assert abs(v - prev) <= 0.05 * v
            prev = v

    def test_sqrt_model_cayley_stabilize_in_K(self):
        prev = None
        for K in (50_000, 100_000, 200_000):
            m = make_sqrt_spectrum(c=1.0, K=K)
            v = cayley_product_norm(m, 1.0, 64, alpha=1.0)
            if prev is not None:
                assert abs(v - prev) <= 0.05 * v
            prev = v
