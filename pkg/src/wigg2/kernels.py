"""Hot numeric kernels: numba @njit versions with pure-numpy fallbacks.

Backend selection: numba is used when importable unless the environment
variable WIGG2_NO_NUMBA is set to 1/true/yes.  Both backends implement
identical arithmetic on a counter-based RNG (splitmix64-style), so every
per-window decision (and hence every integer count) is bit-identical
across backends and independent of how the index range is partitioned
across workers.  Floating-point bootstrap moments may differ in the last
ulp between backends (summation order only).

Per-window draw layout for the HBT simulator (5 uniforms per window):
    u0 -> photon number n from the state's cdf
    u1 -> survivors after detector-efficiency thinning, Binomial(n, eta)
    u2 -> split to detector 1, Binomial(m, split)
    u3, u4 -> dark events on detectors 1 and 2
"""

from __future__ import annotations

import os

import numpy as np

_DISABLE = os.environ.get("WIGG2_NO_NUMBA", "0").lower() in ("1", "true", "yes")

try:
    if _DISABLE:
        raise ImportError
    import numba

    HAVE_NUMBA = True
except ImportError:
    numba = None
    HAVE_NUMBA = False


def backend_name() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


# splitmix64 constants
_PHI = np.uint64(0x9E3779B97F4A7C15)
_C1 = np.uint64(0xBF58476D1CE4E5B9)
_C2 = np.uint64(0x94D049BB133111EB)
_STEP = np.uint64(0xD1342543DE82EF95)
_INV53 = 1.0 / 9007199254740992.0  # 2^-53


# ---------------------------------------------------------------------------
# pure-numpy backend


def _mix_np(z):
    z = (z + _PHI).astype(np.uint64)
    z = (z ^ (z >> np.uint64(30))) * _C1
    z = (z ^ (z >> np.uint64(27))) * _C2
    return z ^ (z >> np.uint64(31))


def uniforms_np(seed: int, idx: np.ndarray, draw: int) -> np.ndarray:
    """Uniform (0,1) doubles for (stream index, draw number), vectorized
    over idx."""
    h = _mix_np(np.uint64(seed) ^ (idx.astype(np.uint64) * _PHI))
    offset = np.uint64((int(draw) * 0xD1342543DE82EF95) & 0xFFFFFFFFFFFFFFFF)
    z = _mix_np(h + offset)
    return (z >> np.uint64(11)).astype(np.float64) * _INV53


def _binom_icdf_np(n: np.ndarray, p: float, u: np.ndarray) -> np.ndarray:
    """Vectorized inverse-CDF Binomial(n, p) draw from uniforms u.
    n entries must be small non-negative ints."""
    if p <= 0.0:
        return np.zeros_like(n)
    if p >= 1.0:
        return n.copy()
    n_max = int(n.max(initial=0))
    nf = n.astype(np.float64)
    r = p / (1.0 - p)
    pmf = (1.0 - p) ** nf
    cum = pmf.copy()
    k = np.zeros_like(n)
    for j in range(n_max):
        # the (j < n) mask keeps decisions identical to the scalar loop,
        # which stops at j = n - 1
        k += ((u >= cum) & (j < n)).astype(n.dtype)
        pmf = pmf * ((nf - j) * r / (j + 1.0))
        cum += pmf
    return np.minimum(k, n)


def hbt_counts_np(cdf, eta, split, dark, seed, start, stop, chunk=1_000_000):
    """Click/coincidence counts for windows [start, stop) — numpy backend."""
    n1 = n2 = nc = 0
    n_max = len(cdf) - 1
    for lo in range(start, stop, chunk):
        hi = min(lo + chunk, stop)
        idx = np.arange(lo, hi, dtype=np.uint64)
        u0 = uniforms_np(seed, idx, 0)
        n = np.searchsorted(cdf, u0, side="right").astype(np.int64)
        np.minimum(n, n_max, out=n)
        u1 = uniforms_np(seed, idx, 1)
        m = _binom_icdf_np(n, eta, u1)
        u2 = uniforms_np(seed, idx, 2)
        k1 = _binom_icdf_np(m, split, u2)
        k2 = m - k1
        u3 = uniforms_np(seed, idx, 3)
        u4 = uniforms_np(seed, idx, 4)
        c1 = (k1 > 0) | (u3 < dark)
        c2 = (k2 > 0) | (u4 < dark)
        n1 += int(c1.sum())
        n2 += int(c2.sum())
        nc += int((c1 & c2).sum())
    return n1, n2, nc


def boot_moments_np(x, n_boot, seed):
    """Bootstrap (mean, unbiased variance) pairs via counter-based
    resampling — numpy backend."""
    n = len(x)
    means = np.empty(n_boot)
    variances = np.empty(n_boot)
    for b in range(n_boot):
        idx = np.arange(np.uint64(b) * np.uint64(n),
                        np.uint64(b) * np.uint64(n) + np.uint64(n),
                        dtype=np.uint64)
        u = uniforms_np(seed, idx, 0)
        xs = x[(u * n).astype(np.int64)]
        s = float(xs.sum())
        ss = float(np.dot(xs, xs))
        mean = s / n
        means[b] = mean
        variances[b] = (ss - n * mean * mean) / (n - 1)
    return means, variances


# ---------------------------------------------------------------------------
# numba backend (same arithmetic, scalar loops)

if HAVE_NUMBA:

    @numba.njit(numba.uint64(numba.uint64), cache=True, nogil=True)
    def _mix_nb(z):
        z = z + numba.uint64(0x9E3779B97F4A7C15)
        z = (z ^ (z >> numba.uint64(30))) * numba.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> numba.uint64(27))) * numba.uint64(0x94D049BB133111EB)
        return z ^ (z >> numba.uint64(31))

    @numba.njit(numba.float64(numba.uint64, numba.uint64, numba.uint64),
                cache=True, nogil=True)
    def _uniform_nb(seed, idx, draw):
        h = _mix_nb(seed ^ (idx * numba.uint64(0x9E3779B97F4A7C15)))
        z = _mix_nb(h + draw * numba.uint64(0xD1342543DE82EF95))
        return (z >> numba.uint64(11)) * (1.0 / 9007199254740992.0)

    @numba.njit(numba.int64(numba.int64, numba.float64, numba.float64),
                cache=True, nogil=True)
    def _binom_icdf_nb(n, p, u):
        if p <= 0.0 or n == 0:
            return 0
        if p >= 1.0:
            return n
        nf = float(n)
        r = p / (1.0 - p)
        pmf = (1.0 - p) ** nf
        cum = pmf
        k = 0
        for j in range(n):
            if u >= cum:
                k += 1
            pmf = pmf * ((nf - j) * r / (j + 1.0))
            cum += pmf
        if k > n:
            k = n
        return k

    @numba.njit(cache=True, nogil=True)
    def hbt_counts_nb(cdf, eta, split, dark, seed, start, stop):
        n1 = 0
        n2 = 0
        nc = 0
        n_max = len(cdf) - 1
        s = numba.uint64(seed)
        for i in range(start, stop):
            idx = numba.uint64(i)
            u0 = _uniform_nb(s, idx, numba.uint64(0))
            n = np.searchsorted(cdf, u0, side="right")
            if n > n_max:
                n = n_max
            u1 = _uniform_nb(s, idx, numba.uint64(1))
            m = _binom_icdf_nb(n, eta, u1)
            u2 = _uniform_nb(s, idx, numba.uint64(2))
            k1 = _binom_icdf_nb(m, split, u2)
            k2 = m - k1
            u3 = _uniform_nb(s, idx, numba.uint64(3))
            u4 = _uniform_nb(s, idx, numba.uint64(4))
            c1 = (k1 > 0) or (u3 < dark)
            c2 = (k2 > 0) or (u4 < dark)
            if c1:
                n1 += 1
            if c2:
                n2 += 1
            if c1 and c2:
                nc += 1
        return n1, n2, nc

    @numba.njit(cache=True, nogil=True)
    def boot_moments_nb(x, n_boot, seed):
        n = len(x)
        means = np.empty(n_boot)
        variances = np.empty(n_boot)
        s = numba.uint64(seed)
        for b in range(n_boot):
            base = numba.uint64(b) * numba.uint64(n)
            tot = 0.0
            tot2 = 0.0
            for j in range(n):
                u = _uniform_nb(s, base + numba.uint64(j), numba.uint64(0))
                v = x[int(u * n)]
                tot += v
                tot2 += v * v
            mean = tot / n
            means[b] = mean
            variances[b] = (tot2 - n * mean * mean) / (n - 1)
        return means, variances

    def hbt_counts(cdf, eta, split, dark, seed, start, stop):
        return hbt_counts_nb(
            np.ascontiguousarray(cdf, dtype=np.float64),
            float(eta), float(split), float(dark),
            np.uint64(seed), np.int64(start), np.int64(stop),
        )

    def boot_moments(x, n_boot, seed):
        return boot_moments_nb(
            np.ascontiguousarray(x, dtype=np.float64), int(n_boot), np.uint64(seed)
        )

else:

    def hbt_counts(cdf, eta, split, dark, seed, start, stop):
        return hbt_counts_np(
            np.ascontiguousarray(cdf, dtype=np.float64),
            float(eta), float(split), float(dark), int(seed), int(start), int(stop),
        )

    def boot_moments(x, n_boot, seed):
        return boot_moments_np(
            np.ascontiguousarray(x, dtype=np.float64), int(n_boot), int(seed)
        )
