import numpy as np
import pytest

from wigg2 import kernels
from wigg2.kernels import (boot_moments_np, hbt_counts_np, uniforms_np)


class TestCounterRng:
    def test_uniform_range_and_determinism(self):
        idx = np.arange(10000, dtype=np.uint64)
        u = uniforms_np(123, idx, 0)
        assert np.all((u >= 0.0) & (u < 1.0))
        assert np.array_equal(u, uniforms_np(123, idx, 0))
        assert not np.array_equal(u, uniforms_np(124, idx, 0))
        assert not np.array_equal(u, uniforms_np(123, idx, 1))

    def test_uniformity(self):
        idx = np.arange(200_000, dtype=np.uint64)
        u = uniforms_np(7, idx, 0)
        assert abs(u.mean() - 0.5) < 0.005
        assert abs(u.var() - 1 / 12) < 0.002


class TestBackendEquivalence:
    def test_hbt_counts_match(self):
        # same arithmetic in both backends -> bit-identical counts
        cdf = np.cumsum([0.95, 0.03, 0.015, 0.004, 0.001])
        for seed in [0, 99]:
            a = hbt_counts_np(cdf, 0.5, 0.5, 0.01, seed, 0, 50_000)
            b = kernels.hbt_counts(cdf, 0.5, 0.5, 0.01, seed, 0, 50_000)
            assert a == tuple(b)

    def test_hbt_counts_shard_invariance(self):
        cdf = np.cumsum([0.9, 0.08, 0.02])
        whole = hbt_counts_np(cdf, 0.7, 0.5, 0.0, 5, 0, 30_000)
        parts = [hbt_counts_np(cdf, 0.7, 0.5, 0.0, 5, lo, lo + 10_000)
                 for lo in (0, 10_000, 20_000)]
        assert whole == tuple(sum(p[i] for p in parts) for i in range(3))

    def test_boot_moments_match(self):
        # resampled indices are identical across backends; the moment
        # floats can differ in the last ulp from summation order
        x = np.random.default_rng(3).normal(1.0, 2.0, 5000)
        m_np, v_np = boot_moments_np(x, 20, 11)
        m, v = kernels.boot_moments(x, 20, 11)
        assert np.allclose(m_np, m, rtol=1e-12, atol=1e-12)
        assert np.allclose(v_np, v, rtol=1e-12)

    def test_boot_moments_sane(self):
        x = np.random.default_rng(5).normal(0.0, 1.0, 20_000)
        m, v = kernels.boot_moments(x, 100, 2)
        assert abs(m.mean() - x.mean()) < 0.01
        assert abs(v.mean() - x.var(ddof=1)) < 0.02


class TestBinomialInverse:
    def test_matches_binomial_law(self):
        from wigg2.kernels import _binom_icdf_np
        n = np.full(200_000, 6, dtype=np.int64)
        u = uniforms_np(17, np.arange(200_000, dtype=np.uint64), 0)
        k = _binom_icdf_np(n, 0.3, u)
        assert k.min() >= 0 and k.max() <= 6
        # mean and variance of Binomial(6, 0.3)
        assert abs(k.mean() - 1.8) < 0.01
        assert abs(k.var() - 6 * 0.3 * 0.7) < 0.02

    def test_edge_probabilities(self):
        from wigg2.kernels import _binom_icdf_np
        n = np.array([4, 2, 0], dtype=np.int64)
        u = np.array([0.3, 0.9, 0.5])
        assert np.array_equal(_binom_icdf_np(n, 0.0, u), [0, 0, 0])
        assert np.array_equal(_binom_icdf_np(n, 1.0, u), [4, 2, 0])
