"""Steady-state Gaussian states by two independent routes.

The analytic route squeezes each chiral mode pair of the Hamiltonian
according to the pairing dissipator; the Lyapunov route solves the full
second-moment fixed-point equation and serves as the oracle at small N.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import solve_continuous_lyapunov

from ._kernels import accumulate_pair_moments
from .core import (
    CovarianceState,
    JumpOperator,
    QuadraticSystem,
    build_diffusion,
    build_drift,
    symplectic_eigenvalues,
    to_quadrature_basis,
)
from .errors import DissipairError, NonUniqueError, UnstableError
from .lattices import EigenmodeSet
from .stability import spectrum

__all__ = [
    "SqueezeParameters",
    "ObservableSet",
    "canonical_sites",
    "bogoliubov_steady_state",
    "lyapunov_steady_state",
    "observables",
    "mirrored_dissipator",
    "squeezed_noise_comparator",
    "dissipative_gap_vs_size",
]

NON_UNIQUE_RTOL = 1e-10
NEAR_DEGENERATE_RTOL = 1e-6


@dataclass(frozen=True)
class SqueezeParameters:
    """Per-pair two-mode squeeze parameters and zero-mode single-mode squeezes.

    ``pair_r[k]``/``pair_phi[k]`` describe the two-mode squeezed vacuum of the
    k-th cooled pair; ``pair_weight[k]`` is the squared overlap weight
    |psi[site0]|^2 (1 - tanh^2 r). ``min_eta_alpha`` is the smallest
    amplitude ratio, i.e. the instability threshold of the configuration.
    """

    pair_r: np.ndarray
    pair_phi: np.ndarray
    pair_weight: np.ndarray
    zero_r: np.ndarray
    zero_phi: np.ndarray
    min_eta_alpha: float


@dataclass(frozen=True)
class ObservableSet:
    """Site-resolved steady-state observables."""

    density: np.ndarray
    normal: np.ndarray
    anomalous: np.ndarray
    total_photons: float
    purity: float


def canonical_sites(jump: JumpOperator) -> tuple[int, int, float, float]:
    """Decompose a pairing jump into (site0, site1, eta, kappa).

    Requires u supported on a single site and v on a single site (or zero).
    """
    nz_u = np.nonzero(np.abs(jump.u) > 0)[0]
    nz_v = np.nonzero(np.abs(jump.v) > 0)[0]
    if nz_u.size != 1:
        raise DissipairError("jump is not a single-site pairing dissipator")
    s0 = int(nz_u[0])
    kappa = float(np.abs(jump.u[s0]) ** 2)
    if nz_v.size == 0:
        return s0, s0, 0.0, kappa
    if nz_v.size != 1:
        raise DissipairError("jump is not a single-site pairing dissipator")
    s1 = int(nz_v[0])
    eta = float(np.abs(jump.v[s1]) / np.abs(jump.u[s0]))
    return s0, s1, eta, kappa


def _cluster(energies: np.ndarray, scale: float, rtol: float) -> list[list[int]]:
    clusters: list[list[int]] = []
    for k in np.argsort(energies):
        if clusters and abs(energies[k] - energies[clusters[-1][-1]]) < rtol * scale:
            clusters[-1].append(int(k))
        else:
            clusters.append([int(k)])
    return clusters


def bogoliubov_steady_state(
    modes: EigenmodeSet,
    jump: JumpOperator,
    degenerate: str = "error",
    cluster_rtol: float = 1e-8,
) -> tuple[CovarianceState, SqueezeParameters]:
    """Assemble the pure steady state from per-pair two-mode squeezing.

    Each positive-energy mode pair (psi_alpha, sign * psi_alpha) receives a
    two-mode squeezed vacuum with tanh r_alpha = eta |psi_alpha[site1] /
    psi_alpha[site0]|; zero modes receive single-mode squeezing. With
    ``degenerate="project"``, energy clusters within ``cluster_rtol`` are
    merged and only the combination the dissipator cools is squeezed (the
    orthogonal slack combinations stay in vacuum); with ``degenerate="error"``
    any degeneracy within 1e-10 (relative) raises :class:`NonUniqueError`.

    Raises :class:`UnstableError` when any tanh r_alpha >= 1.
    """
    if degenerate not in ("error", "project"):
        raise DissipairError("degenerate must be 'error' or 'project'")
    s0, s1, eta, _ = canonical_sites(jump)
    n = modes.n_sites
    sign = modes.sublattice_sign
    if eta > 0 and sign[s0] != sign[s1]:
        raise DissipairError("dissipator sites must share a sublattice")
    energies = modes.energies
    scale = max(np.abs(energies).max() if energies.size else 0.0, 1.0)
    n_zero = modes.zero_modes.shape[1]
    if degenerate == "error":
        gaps = np.diff(np.sort(energies))
        if (gaps.size and gaps.min() < NON_UNIQUE_RTOL * scale) or n_zero > 1:
            raise NonUniqueError("degenerate mode structure; steady state not unique")
        if gaps.size and gaps.min() < NEAR_DEGENERATE_RTOL * scale:
            warnings.warn(
                f"near-degenerate modes (gap {gaps.min():.2e}); relaxation time ~ {scale / gaps.min():.2e}",
                stacklevel=2,
            )
        clusters = [[int(k)] for k in np.argsort(energies)]
        zero_groups = [[k] for k in range(n_zero)]
    else:
        clusters = _cluster(energies, scale, cluster_rtol)
        zero_groups = [list(range(n_zero))] if n_zero else []

    sg0 = sign[s0]
    cooled_p1, cooled_pm, sh2_list, w_list = [], [], [], []
    pair_r, pair_phi, pair_weight = [], [], []
    etas = []

    def cooled_combination(cols: np.ndarray):
        c = cols[s0, :].conj()
        f = cols[s1, :]
        nc = np.linalg.norm(c)
        if nc < 1e-14:
            return None
        rot = c / nc
        return cols @ rot, nc, f @ rot

    for cl in clusters:
        combo = cooled_combination(modes.psi[:, cl])
        if combo is None:
            continue
        psi1, c1, f1 = combo
        if abs(f1) > 1e-14:
            etas.append(c1 / abs(f1))
        t = eta * abs(f1) / c1
        if t >= 1:
            raise UnstableError("a mode pair is heated: tanh r >= 1")
        if t == 0:
            continue
        phase = sg0 * f1 / abs(f1)
        r = np.arctanh(t)
        sh, ch = np.sinh(r), np.cosh(r)
        cooled_p1.append(psi1)
        cooled_pm.append(sign * psi1)
        sh2_list.append(sh**2)
        w_list.append(-phase * sh * ch)
        pair_r.append(r)
        pair_phi.append(np.angle(phase) % (2 * np.pi))
        pair_weight.append(c1**2 * (1 - t**2))

    nm = np.zeros((n, n), dtype=complex)
    mm = np.zeros((n, n), dtype=complex)
    if cooled_p1:
        p1 = np.stack(cooled_p1, axis=1)
        pm = np.stack(cooled_pm, axis=1)
        nm, mm = accumulate_pair_moments(p1, pm, np.array(sh2_list), np.array(w_list))

    zero_r, zero_phi = [], []
    for grp in zero_groups:
        combo = cooled_combination(modes.zero_modes[:, grp])
        if combo is None:
            continue
        psi1, c1, f1 = combo
        if abs(f1) > 1e-14:
            etas.append(c1 / abs(f1))
        t = eta * abs(f1) / c1
        if t >= 1:
            raise UnstableError("the zero mode is heated: tanh r >= 1")
        if t == 0:
            continue
        phase = f1 / abs(f1)
        r = np.arctanh(t)
        sh, ch = np.sinh(r), np.cosh(r)
        nm += sh**2 * np.outer(psi1, psi1.conj())
        mm += (-phase * sh * ch) * np.outer(psi1.conj(), psi1.conj())
        zero_r.append(r)
        zero_phi.append(np.angle(phase) % (2 * np.pi))

    cov = CovarianceState.from_moments(nm, mm)
    params = SqueezeParameters(
        pair_r=np.array(pair_r),
        pair_phi=np.array(pair_phi),
        pair_weight=np.array(pair_weight),
        zero_r=np.array(zero_r),
        zero_phi=np.array(zero_phi),
        min_eta_alpha=float(min(etas)) if etas else np.inf,
    )
    return cov, params


def lyapunov_steady_state(system: QuadraticSystem) -> CovarianceState:
    """Steady covariance from the dense Lyapunov equation A_q V + V A_q^T = -D_q.

    Raises :class:`UnstableError` for unstable drift and
    :class:`DissipairError` when the solver residual exceeds 1e-9 relative.
    """
    bdg = build_drift(system)
    report = spectrum(bdg)
    if not report.stable:
        raise UnstableError(f"drift unstable: max Re eig = {report.max_real_part:.3e}")
    aq = to_quadrature_basis(bdg).a
    dq = build_diffusion(system)
    v = solve_continuous_lyapunov(aq, -dq)
    v = 0.5 * (v + v.T)
    # iterative refinement: slow relaxation modes amplify solver error, and
    # one or two correction solves recover several digits cheaply
    for _ in range(2):
        r = aq @ v + v @ aq.T + dq
        if np.linalg.norm(r) < 1e-14 * max(np.linalg.norm(dq), 1e-300):
            break
        dv = solve_continuous_lyapunov(aq, -r)
        v = v + 0.5 * (dv + dv.T)
    resid = np.linalg.norm(aq @ v + v @ aq.T + dq)
    if resid > 1e-9 * max(np.linalg.norm(dq), 1e-300):
        raise DissipairError(f"Lyapunov residual too large: {resid:.3e}")
    return CovarianceState(v)


def observables(cov: CovarianceState) -> ObservableSet:
    """Densities, correlation blocks, total photon number, and purity."""
    cov.check_physical()
    normal = cov.normal_block()
    anomalous = cov.anomalous_block()
    density = np.maximum(normal.diagonal().real, 0.0)
    nus = symplectic_eigenvalues(cov.v)
    purity = float(np.prod(1.0 / (2.0 * np.maximum(nus, 0.5))))
    return ObservableSet(
        density=density,
        normal=normal,
        anomalous=anomalous,
        total_photons=float(density.sum()),
        purity=purity,
    )


def mirrored_dissipator(system: QuadraticSystem, jump: JumpOperator) -> QuadraticSystem:
    """Add the spatially mirrored partner L' = sqrt(kappa) (a_{N-1-site0}
    - eta a_{N-1-site1}^dag) alongside ``jump``.

    Requires an even-length mirror-symmetric lattice
    (H[i, j] = H[N-1-i, N-1-j]).
    """
    n = system.n_modes
    if n % 2:
        raise DissipairError("mirrored dissipator requires even site count")
    rev = np.arange(n)[::-1]
    if np.abs(system.h - system.h[np.ix_(rev, rev)]).max() > 1e-12 * max(np.abs(system.h).max(), 1.0):
        raise DissipairError("lattice is not mirror-symmetric")
    s0, s1, eta, kappa = canonical_sites(jump)
    u = np.zeros(n, dtype=complex)
    v = np.zeros(n, dtype=complex)
    u[n - 1 - s0] = np.sqrt(kappa)
    v[n - 1 - s1] = -eta * np.sqrt(kappa)
    return replace(system, jumps=(jump, JumpOperator(u, v)))


def squeezed_noise_comparator(system: QuadraticSystem, site0: int, site1: int, eta: float, kappa: float = 1.0):
    """Two-dissipator squeezed-noise bath: L1 = sqrt(kappa)(a_{site0} +
    eta a_{site1}^dag), L2 = sqrt(kappa)(a_{site1} + eta a_{site0}^dag).

    Stable for every eta < 1 regardless of the Hamiltonian. Returns
    (ObservableSet, SpectrumReport) of the resulting steady state.
    """
    if not 0.0 <= eta < 1.0:
        raise DissipairError("eta must lie in [0, 1)")
    n = system.n_modes
    u1 = np.zeros(n, dtype=complex)
    v1 = np.zeros(n, dtype=complex)
    u1[site0] = np.sqrt(kappa)
    v1[site1] = eta * np.sqrt(kappa)
    u2 = np.zeros(n, dtype=complex)
    v2 = np.zeros(n, dtype=complex)
    u2[site1] = np.sqrt(kappa)
    v2[site0] = eta * np.sqrt(kappa)
    sys2 = system.with_jumps((JumpOperator(u1, v1), JumpOperator(u2, v2)))
    report = spectrum(build_drift(sys2))
    cov = lyapunov_steady_state(sys2)
    return observables(cov), report


def dissipative_gap_vs_size(family, sizes) -> list[tuple[int, float]]:
    """Slowest relaxation rate of the drift for each system size.

    ``family(n)`` must return a jump-equipped :class:`QuadraticSystem`.
    Raises :class:`UnstableError` if any size is unstable.
    """
    rows = []
    for n in sizes:
        report = spectrum(build_drift(family(n)))
        if not report.stable:
            raise UnstableError(f"size {n} unstable")
        rows.append((int(n), report.dissipative_gap))
    return rows
