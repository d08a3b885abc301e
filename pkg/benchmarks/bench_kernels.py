"""Benchmark the numba kernels against the pure-numpy fallbacks.

The two backends share the same counter-based RNG arithmetic, so the
integer counting results are bit-identical; this script times them and
verifies that equality on the way through.

Run:
    python3 benchmarks/bench_kernels.py [--windows N] [--boot B]

Set WIGG2_NO_NUMBA=1 to confirm the dispatch wrappers fall back (the
comparison below always calls both implementations explicitly when numba
is importable).
"""

import argparse
import time

import numpy as np

from wigg2 import kernels


def timeit(fn, *args, repeat=3):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--windows", type=int, default=2_000_000)
    ap.add_argument("--boot", type=int, default=200)
    ap.add_argument("--samples", type=int, default=100_000)
    args = ap.parse_args()

    print(f"active backend: {kernels.backend_name()}")
    cdf = np.cumsum([0.9, 0.07, 0.02, 0.008, 0.002])
    hbt_args = (cdf, 0.5, 0.5, 0.001, 42, 0, args.windows)

    t_np, r_np = timeit(kernels.hbt_counts_np, *hbt_args)
    print(f"hbt_counts  numpy : {t_np:8.3f} s   {r_np}")
    if kernels.HAVE_NUMBA:
        kernels.hbt_counts(*hbt_args)  # compile outside the timing
        t_nb, r_nb = timeit(kernels.hbt_counts, *hbt_args)
        same = tuple(r_np) == tuple(r_nb)
        print(f"hbt_counts  numba : {t_nb:8.3f} s   {tuple(r_nb)}   "
              f"speedup x{t_np / t_nb:.1f}   counts {'match' if same else 'DIFFER'}")
        if not same:
            raise SystemExit("backend mismatch in hbt_counts")

    x = np.random.default_rng(0).normal(0.0, 1.0, args.samples)
    t_np, (m_np, v_np) = timeit(kernels.boot_moments_np, x, args.boot, 7)
    print(f"boot_moments numpy: {t_np:8.3f} s")
    if kernels.HAVE_NUMBA:
        kernels.boot_moments(x, args.boot, 7)
        t_nb, (m_nb, v_nb) = timeit(kernels.boot_moments, x, args.boot, 7)
        ok = np.allclose(m_np, m_nb, rtol=1e-12) and np.allclose(v_np, v_nb, rtol=1e-12)
        print(f"boot_moments numba: {t_nb:8.3f} s   speedup x{t_np / t_nb:.1f}   "
              f"moments {'match' if ok else 'DIFFER'}")
        if not ok:
            raise SystemExit("backend mismatch in boot_moments")


if __name__ == "__main__":
    main()
