"""Shared helpers for the test suite."""

import numpy as np
import pytest

from dissipair import QuadraticSystem, canonical_pairing


def random_chiral_chain(n: int, rng, complex_hoppings: bool = False) -> QuadraticSystem:
    """Nearest-neighbor chain with random bond strengths (bipartite by
    construction, so chiral)."""
    h = np.zeros((n, n), dtype=complex)
    for i in range(n - 1):
        t = rng.normal() + (1j * rng.normal() if complex_hoppings else 0.0)
        h[i, i + 1] = t
        h[i + 1, i] = np.conj(t)
    return QuadraticSystem(h)


def random_stable_pairing(system, rng, margin: float = 0.5):
    """Canonical pairing jump on random same-sublattice sites at a stable
    eta = margin * eta_c; returns (jump, site0, site1, eta) or None when the
    draw has no usable site pair."""
    n = system.n_modes
    evens = [i for i in range(n) if i % 2 == 0]
    if len(evens) < 2:
        return None
    s0, s1 = rng.choice(evens, size=2, replace=False)
    w, vecs = np.linalg.eigh(system.h)
    den = np.abs(vecs[s1, :])
    num = np.abs(vecs[s0, :])
    mask = den > 1e-12
    if not mask.any():
        return None
    eta_c = (num[mask] / den[mask]).min()
    eta = margin * min(eta_c, 1.0)
    if eta <= 1e-6:
        return None
    kappa = rng.uniform(0.3, 3.0)
    return canonical_pairing(n, int(s0), int(s1), eta, kappa), int(s0), int(s1), eta


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
