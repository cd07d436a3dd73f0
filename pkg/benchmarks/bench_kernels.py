"""Benchmark the numba kernel path against the pure-numpy fallback.

Run with the package installed::

    python3 benchmarks/bench_kernels.py [n_sites] [n_pairs]

The numba path is toggled off by setting DISSIPAIR_DISABLE_NUMBA=1; this
script imports both implementations directly so a single process can time
the comparison and check agreement.
"""

from __future__ import annotations

import sys
import time

import numpy as np

from dissipair import _kernels


def run(n: int, k: int, repeats: int = 5) -> None:
    rng = np.random.default_rng(0)
    p1 = rng.normal(size=(n, k)) + 1j * rng.normal(size=(n, k))
    pm = rng.normal(size=(n, k)) + 1j * rng.normal(size=(n, k))
    sh2 = rng.uniform(0, 2, size=k)
    w = rng.normal(size=k) + 1j * rng.normal(size=k)

    ref = _kernels._accumulate_numpy(p1, pm, sh2, w)
    timings = {}
    variants = [("numpy", _kernels._accumulate_numpy)]
    if _kernels._njit_impl is not None:
        variants.append(("numba", _kernels._njit_impl))
        _kernels._njit_impl(p1, pm, sh2, w)  # compile outside the timed loop
    for name, fn in variants:
        best = np.inf
        for _ in range(repeats):
            t0 = time.perf_counter()
            out = fn(p1, pm, sh2, w)
            best = min(best, time.perf_counter() - t0)
        err = max(np.abs(out[0] - ref[0]).max(), np.abs(out[1] - ref[1]).max())
        timings[name] = best
        print(f"{name:>6}: {best * 1e3:8.2f} ms   max deviation vs numpy {err:.2e}")
    if "numba" in timings:
        print(f"speedup numba/numpy: {timings['numpy'] / timings['numba']:.2f}x")
    else:
        print("numba unavailable or disabled; numpy fallback only")


if __name__ == "__main__":
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 576
    k = int(sys.argv[2]) if len(sys.argv) > 2 else 288
    run(n, k)
