"""Kernel fast path vs numpy fallback agreement and the disable flag."""

import os
import subprocess
import sys

import numpy as np

from dissipair import _kernels


def _random_inputs(rng, n=24, k=11):
    p1 = rng.normal(size=(n, k)) + 1j * rng.normal(size=(n, k))
    pm = rng.normal(size=(n, k)) + 1j * rng.normal(size=(n, k))
    sh2 = rng.uniform(0, 2, size=k)
    w = rng.normal(size=k) + 1j * rng.normal(size=k)
    return p1, pm, sh2, w


def test_paths_agree(rng):
    p1, pm, sh2, w = _random_inputs(rng)
    nm_ref, mm_ref = _kernels._accumulate_numpy(p1, pm, sh2, w)
    nm, mm = _kernels.accumulate_pair_moments(p1, pm, sh2, w)
    assert np.abs(nm - nm_ref).max() < 1e-12
    assert np.abs(mm - mm_ref).max() < 1e-12


def test_empty_input():
    z = np.zeros((5, 0), dtype=complex)
    nm, mm = _kernels.accumulate_pair_moments(z, z, np.zeros(0), np.zeros(0, complex))
    assert nm.shape == (5, 5)
    assert np.abs(nm).max() == 0.0
    assert np.abs(mm).max() == 0.0


def test_moment_blocks_have_expected_symmetry(rng):
    p1, pm, sh2, w = _random_inputs(rng)
    nm, mm = _kernels.accumulate_pair_moments(p1, pm, sh2, w)
    assert np.abs(nm - nm.conj().T).max() < 1e-12  # normal block Hermitian
    assert np.abs(mm - mm.T).max() < 1e-12  # anomalous block symmetric


def test_disable_flag_forces_numpy_fallback():
    code = (
        "from dissipair import _kernels\n"
        "assert not _kernels.numba_enabled()\n"
        "import numpy as np\n"
        "rng = np.random.default_rng(0)\n"
        "p1 = rng.normal(size=(6, 3)) + 1j * rng.normal(size=(6, 3))\n"
        "nm, mm = _kernels.accumulate_pair_moments(p1, p1, np.ones(3), np.ones(3, complex))\n"
        "ref = _kernels._accumulate_numpy(p1, p1, np.ones(3), np.ones(3, complex))\n"
        "assert np.abs(nm - ref[0]).max() == 0.0\n"
    )
    env = dict(os.environ, DISSIPAIR_DISABLE_NUMBA="1")
    subprocess.run([sys.executable, "-c", code], check=True, env=env)
