"""Lattice builders, chiral-symmetry checks, and eigenmode bookkeeping."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import dissipair as dp
from dissipair.lattices import LatticeGeometry

from conftest import random_chiral_chain


def test_geometry_indexing_roundtrip():
    geom = LatticeGeometry("square_open", (4, 6))
    for idx in range(geom.n_sites):
        assert geom.site_index(geom.coord(idx)) == idx


def test_geometry_cylinder_wraps_second_coordinate():
    geom = LatticeGeometry("square_cylinder", (4, 6))
    assert geom.site_index((2, 6)) == geom.site_index((2, 0))
    assert geom.site_index((2, -1)) == geom.site_index((2, 5))
    with pytest.raises(dp.DissipairError):
        geom.site_index((4, 0))


def test_geometry_rejects_unknown_kind():
    with pytest.raises(dp.DissipairError):
        LatticeGeometry("triangular", (3, 3))


def test_three_mode_spectrum_and_dark_mode():
    j1, j2 = 0.75, 1.0
    system = dp.build_three_mode(j1, j2)
    w = np.linalg.eigvalsh(system.h)
    gap = np.sqrt(j1**2 + j2**2)
    assert np.allclose(w, [-gap, 0.0, gap], atol=1e-12)
    modes = dp.eigenpairs(system)
    assert modes.zero_modes.shape == (3, 1)
    # dark mode (j2, 0, -j1)/|..| avoids the centre site
    assert np.allclose(modes.zero_modes[:, 0], [0.8, 0.0, -0.6], atol=1e-12)


def test_ssh_zero_mode_decay_ratio():
    alpha = -0.65
    system = dp.build_ssh(99, alpha)
    modes = dp.eigenpairs(system)
    assert modes.zero_modes.shape[1] == 1
    z = modes.zero_modes[:, 0]
    # per-cell decay (weak bond / strong bond); two cells from site 0 to 4
    expect = ((1 + alpha) / (1 - alpha)) ** 2
    assert abs(z[4] / z[0]) == pytest.approx(expect, rel=1e-10)
    assert expect == pytest.approx(0.0450, abs=5e-5)


def test_ssh_zero_mode_lives_on_one_sublattice():
    modes = dp.eigenpairs(dp.build_ssh(21, -0.5))
    z = modes.zero_modes[:, 0]
    assert np.abs(z[1::2]).max() < 1e-12
    assert np.abs(z[0::2]).max() > 0.1


def test_ssh_uniform_chain_closed_form():
    n, j = 12, 0.8
    system = dp.build_ssh(n, 0.0, j=j)
    w = np.sort(np.linalg.eigvalsh(system.h))
    expect = np.sort(2 * j * np.cos(np.pi * np.arange(1, n + 1) / (n + 1)))
    assert np.abs(w - expect).max() < 1e-12


def test_ssh_convention_flag_flips_alpha():
    a = dp.build_ssh(10, 0.3, convention="minus").h
    b = dp.build_ssh(10, -0.3, convention="plus").h
    assert np.abs(a - b).max() == 0.0


def test_ssh_edge_splitting_decays_exponentially():
    # even chains with weak edge bonds host a hybridized edge pair whose
    # splitting shrinks geometrically with length
    sizes = [8, 12, 16, 20]
    split = [
        dp.eigenpairs(dp.build_ssh(n, -0.2), degeneracy_tol=1e-15).energies.min()
        for n in sizes
    ]
    ratios = np.array(split[1:]) / np.array(split[:-1])
    assert (ratios < 0.5).all()
    # log-linear decay: consecutive decay factors agree to ~cell accuracy
    assert np.abs(np.diff(np.log(ratios))).max() < 0.2


def test_ssh_disorder_deterministic_and_seed_dependent():
    a = dp.build_ssh(15, -0.4, sigma=0.1, seed=3).h
    b = dp.build_ssh(15, -0.4, sigma=0.1, seed=3).h
    c = dp.build_ssh(15, -0.4, sigma=0.1, seed=4).h
    assert np.abs(a - b).max() == 0.0
    assert np.abs(a - c).max() > 0.0


def test_ssh_counter_based_seed_sequence_accepted():
    a = dp.build_ssh(15, -0.4, sigma=0.1, seed=[7, 1, 2, 3]).h
    b = dp.build_ssh(15, -0.4, sigma=0.1, seed=[7, 1, 2, 3]).h
    assert np.abs(a - b).max() == 0.0


def test_ssh_input_validation():
    with pytest.raises(dp.DissipairError):
        dp.build_ssh(1, 0.0)
    with pytest.raises(dp.DissipairError):
        dp.build_ssh(10, 1.0)
    with pytest.raises(dp.DissipairError):
        dp.build_ssh(10, 0.1, convention="other")


def test_hofstadter_hermitian_symmetric_and_bounded():
    system = dp.build_hofstadter(6, 8)
    h = system.h
    assert np.abs(h - h.conj().T).max() == 0.0
    w = np.sort(np.linalg.eigvalsh(h))
    # bipartite: spectrum symmetric about zero
    assert np.abs(w + w[::-1]).max() < 1e-12
    # Gershgorin: coordination <= 4 with unit-magnitude bonds
    assert np.abs(w).max() <= 4.0 + 1e-12


def test_hofstadter_quarter_flux_plaquette_phase():
    system = dp.build_hofstadter(4, 4)
    geom = system.geometry
    h = system.h
    s = [geom.site_index(c) for c in [(1, 1), (2, 1), (2, 2), (1, 2)]]
    loop = h[s[0], s[1]] * h[s[1], s[2]] * h[s[2], s[3]] * h[s[3], s[0]]
    assert loop == pytest.approx(np.exp(1j * np.pi / 2))


def test_hofstadter_cylinder_adds_wrap_bonds():
    open_h = dp.build_hofstadter(4, 4).h
    cyl_h = dp.build_hofstadter(4, 4, "cylinder").h
    geom = LatticeGeometry("square_cylinder", (4, 4))
    extra = cyl_h - open_h
    assert np.count_nonzero(extra) == 8  # one wrap bond per row, both directions
    assert extra[geom.site_index((2, 3)), geom.site_index((2, 0))] != 0


def test_check_chiral_two_colors_bipartite_lattices():
    for system in (dp.build_ssh(13, -0.3), dp.build_hofstadter(4, 6)):
        sign = dp.check_chiral(system)
        h = system.h
        ii, jj = np.nonzero(np.abs(h) > 1e-12)
        assert (sign[ii] * sign[jj] == -1).all()


def test_check_chiral_witnesses_frustrated_bond():
    h = np.zeros((4, 4), dtype=complex)
    for i, j in [(0, 1), (1, 2), (2, 0), (2, 3)]:  # triangle breaks 2-coloring
        h[i, j] = h[j, i] = 1.0
    with pytest.raises(dp.ChiralSymmetryError) as exc:
        dp.check_chiral(dp.QuadraticSystem(h))
    assert exc.value.witness is not None


def test_check_chiral_witnesses_diagonal_term():
    h = np.diag([0.0, 1.0]).astype(complex)
    with pytest.raises(dp.ChiralSymmetryError):
        dp.check_chiral(dp.QuadraticSystem(h))


def test_eigenpairs_partner_is_negative_energy_eigenvector(rng):
    system = random_chiral_chain(9, rng, complex_hoppings=True)
    modes = dp.eigenpairs(system)
    h = system.h
    for k in range(modes.energies.size):
        pm = modes.partner(k)
        # site amplitudes are conjugated eigenvector entries
        resid = np.abs(h @ pm.conj() + modes.energies[k] * pm.conj()).max()
        assert resid < 1e-10


def test_eigenpairs_phases_deterministic(rng):
    system = random_chiral_chain(8, rng)
    m1 = dp.eigenpairs(system)
    m2 = dp.eigenpairs(system)
    assert np.array_equal(m1.psi, m2.psi)
    assert np.array_equal(m1.zero_modes, m2.zero_modes)
    # phase convention: largest component of each column is real positive
    for k in range(m1.psi.shape[1]):
        z = m1.psi[np.argmax(np.abs(m1.psi[:, k])), k]
        assert z.imag == pytest.approx(0.0, abs=1e-14)
        assert z.real > 0


def test_eigenpairs_rejects_non_chiral():
    h = np.array([[0.5, 1.0], [1.0, -0.5]], dtype=complex)
    with pytest.raises(dp.ChiralSymmetryError):
        dp.eigenpairs(dp.QuadraticSystem(h))


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=3, max_value=10), st.integers(min_value=0, max_value=10_000))
def test_eigenpairs_mode_count_and_pairing(n, seed):
    rng = np.random.default_rng(seed)
    system = random_chiral_chain(n, rng)
    modes = dp.eigenpairs(system)
    assert 2 * modes.energies.size + modes.zero_modes.shape[1] == n
    assert (modes.energies > 0).all()
    assert set(np.unique(modes.sublattice_sign)) <= {-1.0, 1.0}


def test_all_ratios_masks_vanishing_denominator():
    modes = dp.eigenpairs(dp.build_three_mode(0.75, 1.0))
    # the dark mode vanishes on the centre site: ratio against it is inf
    ratios = modes.all_ratios(0, 1)
    assert np.isinf(ratios[-1])


def test_cylinder_bands_shapes_and_chiral_shift():
    system = dp.build_hofstadter(8, 16, "cylinder")
    ks, en, mx = dp.cylinder_bands(system)
    assert en.shape == (16, 8) and mx.shape == (16, 8)
    assert abs(en.sum()) < 1e-10
    # chiral symmetry maps momentum k -> k + pi with energy negation
    es = np.sort(en, axis=1)
    shifted = np.sort(-en[(np.arange(16) + 8) % 16], axis=1)
    assert np.abs(es - shifted).max() < 1e-12
    assert (mx >= 0).all() and (mx <= 3.5 + 1e-12).all()


def test_cylinder_bands_requires_cylinder_geometry():
    with pytest.raises(dp.DissipairError):
        dp.cylinder_bands(dp.build_hofstadter(4, 4))
