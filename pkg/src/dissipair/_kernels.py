"""Hot numerical kernels with an optional numba fast path.

The accelerated path is used when numba is importable and the environment
variable DISSIPAIR_DISABLE_NUMBA is unset/empty; otherwise a pure-numpy
BLAS formulation is used. Both paths are exact (no approximation differs);
``benchmarks/bench_kernels.py`` compares them.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = ["accumulate_pair_moments", "numba_enabled"]


def _numba_requested() -> bool:
    return not os.environ.get("DISSIPAIR_DISABLE_NUMBA", "")


_njit_impl = None
if _numba_requested():
    try:
        from numba import njit, prange

        @njit(cache=True, parallel=True)
        def _accumulate_numba(p1, pm, sh2, w):  # pragma: no cover - exercised via wrapper
            n, k = p1.shape
            nm = np.zeros((n, n), dtype=np.complex128)
            mm = np.zeros((n, n), dtype=np.complex128)
            for i in prange(n):
                for a in range(k):
                    s = sh2[a]
                    wa = w[a]
                    x1 = s * p1[i, a]
                    xm = s * pm[i, a]
                    y1 = wa * np.conj(p1[i, a])
                    ym = wa * np.conj(pm[i, a])
                    for j in range(n):
                        nm[i, j] += x1 * np.conj(p1[j, a]) + xm * np.conj(pm[j, a])
                        mm[i, j] += y1 * np.conj(pm[j, a]) + ym * np.conj(p1[j, a])
            return nm, mm

        _njit_impl = _accumulate_numba
    except Exception:  # numba unavailable or broken: fall back silently
        _njit_impl = None


def numba_enabled() -> bool:
    """True when the numba fast path is active."""
    return _njit_impl is not None


def _accumulate_numpy(p1, pm, sh2, w):
    nm = (p1 * sh2) @ p1.conj().T + (pm * sh2) @ pm.conj().T
    mm = (p1.conj() * w) @ pm.conj().T + (pm.conj() * w) @ p1.conj().T
    return nm, mm


def accumulate_pair_moments(p1: np.ndarray, pm: np.ndarray, sh2: np.ndarray, w: np.ndarray):
    """Accumulate squeezed-pair contributions to the second moments.

    Parameters
    ----------
    p1, pm : (N, K) complex
        Cooled mode functions and their chiral partners, one column per pair.
    sh2 : (K,) real
        sinh^2(r) occupation weight per pair.
    w : (K,) complex
        Anomalous weight -e^{i phi} sinh(r) cosh(r) per pair.

    Returns
    -------
    (nm, mm) : pair of (N, N) complex
        Contributions to <a^dag a>^T-ordered normal block N_ij = <a_i^dag a_j>
        and anomalous block M_ij = <a_i a_j>.
    """
    p1 = np.ascontiguousarray(p1, dtype=np.complex128)
    pm = np.ascontiguousarray(pm, dtype=np.complex128)
    sh2 = np.ascontiguousarray(sh2, dtype=np.float64)
    w = np.ascontiguousarray(w, dtype=np.complex128)
    if p1.size == 0:
        n = p1.shape[0]
        return np.zeros((n, n), complex), np.zeros((n, n), complex)
    if _njit_impl is not None:
        return _njit_impl(p1, pm, sh2, w)
    return _accumulate_numpy(p1, pm, sh2, w)
