"""Output-field squeezing spectra from the explicit lossy-ancilla realization."""

import numpy as np
import pytest

import dissipair as dp
from dissipair.spectrum_io import (
    IoSetup,
    _BAR,
    _C,
    _output_row,
    build_io_system,
    default_frequency_grid,
    eta_opt_search,
    squeezing_spectrum,
)


@pytest.fixture(scope="module")
def chain():
    return dp.build_ssh(9, -0.65)


def _setup(chain, eta, **kw):
    return IoSetup(system=chain, site0=2, site1=0, eta=eta, **kw)


def test_zero_eta_gives_flat_vacuum_spectrum(chain):
    res = squeezing_spectrum(_setup(chain, 0.0), np.linspace(-3, 3, 21))
    assert np.abs(res.p - 1.0).max() < 1e-12


def test_decoupled_ancilla_gives_flat_spectrum(chain):
    res = squeezing_spectrum(_setup(chain, 0.19, g=1e-6), np.linspace(-2, 2, 11))
    assert np.abs(res.p - 1.0).max() < 1e-9


def test_spectrum_is_even_in_frequency(chain):
    grid = np.array([-1.3, -0.5, -0.1, 0.1, 0.5, 1.3])
    res = squeezing_spectrum(_setup(chain, 0.19), grid)
    assert np.abs(res.p - res.p[::-1]).max() < 1e-10


def test_quadrature_uncertainty_product(chain):
    # the minimized and maximized quadrature noises obey P_min P_max >= 1
    setup = _setup(chain, 0.19)
    a, b = build_io_system(setup)
    for w in (0.0, 0.3, 1.1):
        wp = _output_row(a, b, w, setup.probe_site, setup.gamma_wg)
        wm = _output_row(a, b, -w, setup.probe_site, setup.gamma_wg)
        t1 = np.einsum("m,n,mn->", wp, wm, _C)
        t2 = np.einsum("m,n,mn->", wp, wp.conj(), _C[:, _BAR])
        t3 = np.einsum("m,n,mn->", wm.conj(), wm, _C[_BAR, :])
        t4 = np.einsum("m,n,mn->", wm.conj(), wp.conj(), _C[_BAR][:, _BAR])
        c0 = (t2 + t3).real
        swing = 2.0 * np.sqrt(abs(t1 * t4))
        assert (c0 - swing) * (c0 + swing) >= 1.0 - 1e-9


def test_far_detuned_noise_returns_to_vacuum(chain):
    res = squeezing_spectrum(_setup(chain, 0.19), np.array([25.0, 60.0]))
    assert np.abs(res.p - 1.0).max() < 1e-3


def test_eta_opt_sits_just_below_threshold(chain):
    # deep squeezing happens approaching the instability of the engineered
    # dissipator; for this chain the closed-form threshold is
    # (1 + alpha) / (1 - alpha) = 7/33
    eta_c = (1 - 0.65) / (1 + 0.65)
    eta_opt, p0 = eta_opt_search(_setup(chain, 0.19), (0.19, 0.2120))
    assert eta_opt == pytest.approx(eta_c, rel=5e-2)
    assert eta_opt < eta_c
    assert p0 < 0.1


def test_unstable_eta_raises(chain):
    with pytest.raises(dp.UnstableError):
        build_io_system(_setup(chain, 0.30))


def test_default_frequency_grid_shape():
    grid = default_frequency_grid(2.0, count=101, span=5.0)
    assert grid.size == 101
    assert grid[50] == 0.0
    assert grid.max() == pytest.approx(10.0)
    assert np.abs(grid + grid[::-1]).max() < 1e-12


def test_setup_validation(chain):
    with pytest.raises(dp.DissipairError):
        IoSetup(system=chain, site0=2, site1=0, eta=0.1, gamma_wg=0.0)
    with pytest.warns(UserWarning, match="weak-probe"):
        IoSetup(system=chain, site0=2, site1=0, eta=0.1, gamma_wg=20.0)
