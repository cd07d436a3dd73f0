"""Frequency-domain output-field squeezing spectra.

The pairing dissipator is realized by an explicit lossy ancilla mode b
coupled as g (a_{site0} + eta a_{site1}^dag) b^dag + h.c.; a weak waveguide
port of rate gamma_wg on the probe site collects the output field
a_out = a_in - sqrt(gamma_wg) a_probe.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import QuadraticSystem
from .errors import DissipairError, UnstableError

__all__ = [
    "IoSetup",
    "SqueezeSpectrumResult",
    "build_io_system",
    "squeezing_spectrum",
    "eta_opt_search",
    "default_frequency_grid",
]


@dataclass(frozen=True)
class IoSetup:
    """Extended-system configuration for the output spectrum.

    ``system`` is the bare lattice (no jumps); the ancilla provides the
    engineered dissipation with effective rate 4 g^2 / kappa in the
    adiabatic regime kappa >> g.
    """

    system: QuadraticSystem
    site0: int
    site1: int
    eta: float
    g: float = 4.0
    kappa: float = 10.0
    probe_site: int = 0
    gamma_wg: float = 1e-3

    def __post_init__(self):
        if self.gamma_wg <= 0 or self.kappa <= 0:
            raise DissipairError("gamma_wg and kappa must be positive")
        if self.gamma_wg >= self.kappa:
            import warnings

            warnings.warn("gamma_wg >= kappa: outside the weak-probe regime", stacklevel=2)


@dataclass(frozen=True)
class SqueezeSpectrumResult:
    """Squeezing spectrum P(omega) = min_theta output quadrature noise,
    vacuum-normalized to 1, with the minimizing angle per frequency."""

    omega: np.ndarray
    p: np.ndarray
    theta_opt: np.ndarray


def build_io_system(setup: IoSetup):
    """Drift and input matrices of the lattice + ancilla system.

    Returns (a, b) with a the 2M x 2M drift over (modes, conjugates),
    M = N + 1 (ancilla last), and b mapping the 4 input channels
    (waveguide, ancilla bath, and their conjugates) into the equations of
    motion. Raises :class:`UnstableError` when the extended drift is
    unstable.
    """
    n = setup.system.n_modes
    m = n + 1
    ht = np.zeros((m, m), dtype=complex)
    ht[:n, :n] = setup.system.h
    ht[setup.site0, n] = setup.g
    ht[n, setup.site0] = setup.g
    pm = np.zeros((m, m), dtype=complex)
    pm[setup.site1, n] = setup.g * setup.eta / 2
    pm[n, setup.site1] = setup.g * setup.eta / 2
    lam = np.zeros(m)
    lam[setup.probe_site] = setup.gamma_wg / 2
    lam[n] = setup.kappa / 2
    a = np.zeros((2 * m, 2 * m), dtype=complex)
    a[:m, :m] = -1j * ht - np.diag(lam)
    a[:m, m:] = -2j * pm
    a[m:, :m] = 2j * pm.conj()
    a[m:, m:] = 1j * ht.conj() - np.diag(lam)
    b = np.zeros((2 * m, 4))
    b[setup.probe_site, 0] = np.sqrt(setup.gamma_wg)
    b[n, 1] = np.sqrt(setup.kappa)
    b[m + setup.probe_site, 2] = np.sqrt(setup.gamma_wg)
    b[2 * m - 1, 3] = np.sqrt(setup.kappa)
    if np.linalg.eigvals(a).real.max() > 1e-10 * max(np.abs(a).max(), 1.0):
        raise UnstableError("extended lattice + ancilla drift is unstable")
    return a, b


def default_frequency_grid(j_scale: float = 1.0, count: int = 801, span: float = 5.0) -> np.ndarray:
    """Symmetric grid on [-span J, span J], logarithmically dense near 0."""
    half = (count - 1) // 2
    pos = np.geomspace(1e-4 * j_scale, span * j_scale, half)
    return np.concatenate([-pos[::-1], [0.0], pos])


# input correlators <xi_m(w) xi_n(-w)> for vacuum white noise, channel order
# (a_in1, a_in2, a_in1^dag, a_in2^dag)
_C = np.zeros((4, 4))
_C[0, 2] = _C[1, 3] = 1.0
_BAR = np.array([2, 3, 0, 1])


def _output_row(a: np.ndarray, b: np.ndarray, omega: float, probe: int, gamma_wg: float) -> np.ndarray:
    m2 = a.shape[0]
    g = np.linalg.solve(-1j * omega * np.eye(m2) - a, b)
    row = np.zeros(4, dtype=complex)
    row[0] = 1.0
    return row - np.sqrt(gamma_wg) * g[probe, :]


def _p_at(a, b, omega, probe, gamma_wg):
    wp = _output_row(a, b, omega, probe, gamma_wg)
    wm = _output_row(a, b, -omega, probe, gamma_wg)
    t1 = np.einsum("m,n,mn->", wp, wm, _C)
    t2 = np.einsum("m,n,mn->", wp, wp.conj(), _C[:, _BAR])
    t3 = np.einsum("m,n,mn->", wm.conj(), wm, _C[_BAR, :])
    t4 = np.einsum("m,n,mn->", wm.conj(), wp.conj(), _C[_BAR][:, _BAR])
    c0 = (t2 + t3).real
    p = c0 - 2.0 * np.sqrt(abs(t1 * t4))
    theta = ((np.angle(t1) + np.pi) / 2.0) % np.pi if abs(t1) > 0 else 0.0
    return p, theta


def squeezing_spectrum(setup: IoSetup, omega_grid=None) -> SqueezeSpectrumResult:
    """Minimum output quadrature noise over the homodyne angle per frequency.

    The output quadrature spectral density is c0 + 2 Re(e^{-2 i theta} S_aa);
    the analytic minimum c0 - 2|S_aa| is attained at
    theta = (arg S_aa + pi)/2.
    """
    a, b = build_io_system(setup)
    if omega_grid is None:
        jscale = max(np.abs(setup.system.h).max(), 1.0)
        omega_grid = default_frequency_grid(jscale)
    omega_grid = np.asarray(omega_grid, dtype=float)
    p = np.empty_like(omega_grid)
    theta = np.empty_like(omega_grid)
    for k, w in enumerate(omega_grid):
        p[k], theta[k] = _p_at(a, b, w, setup.probe_site, setup.gamma_wg)
    if np.any(p <= 0):
        raise DissipairError("nonpositive spectral density; resolvent near-singular")
    return SqueezeSpectrumResult(omega=omega_grid, p=p, theta_opt=theta)


def eta_opt_search(setup: IoSetup, bracket: tuple[float, float], tol: float = 1e-6):
    """Golden-section minimization of P(0) over eta inside ``bracket``.

    Returns (eta_opt, p0). The bracket endpoints must both be stable.
    """
    from dataclasses import replace

    def p0(eta: float) -> float:
        a, b = build_io_system(replace(setup, eta=eta))
        return _p_at(a, b, 0.0, setup.probe_site, setup.gamma_wg)[0]

    lo, hi = bracket
    try:
        p0(lo), p0(hi)
    except UnstableError as exc:
        raise DissipairError("bracket touches the instability region") from exc
    invphi = (np.sqrt(5) - 1) / 2
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc, fd = p0(c), p0(d)
    while hi - lo > tol:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = p0(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = p0(d)
    eta_opt = 0.5 * (lo + hi)
    return float(eta_opt), float(p0(eta_opt))
