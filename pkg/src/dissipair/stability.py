"""Drift spectra, stability boundaries, FGR rates, and exceptional points."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import BdgMatrix, QuadraticSystem, build_drift
from .errors import DissipairError
from .lattices import EigenmodeSet

__all__ = [
    "SpectrumReport",
    "StabilityBoundary",
    "ExceptionalPoint",
    "spectrum",
    "eta_critical_spectral",
    "eta_critical_wavefunction",
    "fgr_rates",
    "ep_scan",
    "closed_form_thresholds",
    "build_dimer_bs_pa",
    "dimer_drift",
]

EP_GAP_TOL = 1e-6
EP_ALIGN_TOL = 1e-6


@dataclass(frozen=True)
class SpectrumReport:
    """Eigenvalues of a drift matrix with a stability verdict.

    ``dissipative_gap`` is the slowest nonzero relaxation rate,
    min |Re lambda| over eigenvalues with Re lambda != 0 exactly.
    """

    eigenvalues: np.ndarray
    max_real_part: float
    stable: bool
    dissipative_gap: float


@dataclass(frozen=True)
class StabilityBoundary:
    parameter: str
    critical_value: float
    bracket: tuple[float, float]
    method: str


@dataclass(frozen=True)
class ExceptionalPoint:
    """Location where two drift eigenvalues and eigenvectors coalesce."""

    parameter: float
    gap: float
    alignment_defect: float


def spectrum(bdg: BdgMatrix) -> SpectrumReport:
    """Dense eigensolve with stability classification.

    Stable iff every Re(lambda) <= stability_tol = 1e-10 * spectral radius.
    """
    try:
        w = np.linalg.eigvals(bdg.a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise DissipairError(f"eigensolver failed: {exc}") from exc
    radius = np.abs(w).max() if w.size else 0.0
    tol = 1e-10 * max(radius, 1e-300)
    max_re = float(w.real.max())
    re = np.abs(w.real)
    nonzero = re[re > 0]
    gap = float(nonzero.min()) if nonzero.size else 0.0
    return SpectrumReport(
        eigenvalues=w,
        max_real_part=max_re,
        stable=max_re <= tol,
        dissipative_gap=gap,
    )


def _is_stable(system: QuadraticSystem) -> bool:
    # bisection needs a far tighter classification than the reporting
    # tolerance in spectrum(): near the boundary the growth rate crosses
    # zero with a very small slope, so a loose tolerance shifts the
    # located threshold by orders of magnitude more than the bisection width
    return spectrum(build_drift(system)).max_real_part <= 0.0


def eta_critical_spectral(
    system_at: Callable[[float], QuadraticSystem],
    bracket: tuple[float, float],
    rel_tol: float = 1e-8,
    max_iter: int = 200,
) -> StabilityBoundary:
    """Bisection on max Re eig(A(eta)) between a stable and an unstable eta."""
    lo, hi = bracket
    if not (_is_stable(system_at(lo)) and not _is_stable(system_at(hi))):
        raise DissipairError("bracket must be (stable, unstable)")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if _is_stable(system_at(mid)):
            lo = mid
        else:
            hi = mid
        if hi - lo <= rel_tol * max(abs(hi), 1e-30):
            break
    return StabilityBoundary("eta", 0.5 * (lo + hi), bracket, "bisection")


def eta_critical_wavefunction(
    modes: EigenmodeSet, site0: int, site1: int, cluster_rtol: float = 0.0
) -> StabilityBoundary:
    """Critical imbalance from mode amplitudes: min |psi_alpha[site0] / psi_alpha[site1]|.

    Requires site0 and site1 on the same sublattice. With ``cluster_rtol`` > 0,
    energies within that relative tolerance are merged and the ratio is taken
    for the combination the dissipator cools (appropriate when hybridized
    near-degenerate eigenvectors make raw per-mode ratios meaningless).
    """
    sign = modes.sublattice_sign
    if sign[site0] != sign[site1]:
        raise DissipairError("dissipator sites must share a sublattice")
    if cluster_rtol <= 0:
        ratios = modes.all_ratios(site0, site1)
        finite = ratios[np.isfinite(ratios)]
        if not finite.size:
            raise DissipairError("no mode couples to the pumped site")
        return StabilityBoundary("eta", float(finite.min()), (0.0, np.inf), "closed_form")
    energies = modes.energies
    scale = max(np.abs(energies).max() if energies.size else 0.0, 1.0)
    groups: list[list[int]] = []
    for k in np.argsort(energies):
        if groups and abs(energies[k] - energies[groups[-1][-1]]) < cluster_rtol * scale:
            groups[-1].append(int(k))
        else:
            groups.append([int(k)])
    cols_list = [modes.psi[:, g] for g in groups]
    if modes.zero_modes.size:
        cols_list.append(modes.zero_modes)
    best = np.inf
    for cols in cols_list:
        c = cols[site0, :].conj()
        f = cols[site1, :]
        nc = np.linalg.norm(c)
        if nc < 1e-14:
            continue
        f1 = abs(f @ (c / nc))
        if f1 > 1e-14:
            best = min(best, nc / f1)
    if not np.isfinite(best):
        raise DissipairError("no mode couples to the pumped site")
    return StabilityBoundary("eta", float(best), (0.0, np.inf), "closed_form")


def fgr_rates(modes: EigenmodeSet, jump) -> np.ndarray:
    """First-order relaxation rate per mode (positive-energy modes then zero
    modes): Gamma_alpha = sum_L (|u . psi*|^2 - |v . psi|^2) / 2.

    Negative values signal heating (instability at first order).
    """
    cols = np.concatenate([modes.psi, modes.zero_modes], axis=1) if modes.zero_modes.size else modes.psi
    jumps = jump if isinstance(jump, (list, tuple)) else [jump]
    rates = np.zeros(cols.shape[1])
    for jo in jumps:
        cool = np.abs(jo.u @ cols.conj()) ** 2
        heat = np.abs(jo.v @ cols) ** 2
        rates += 0.5 * (cool - heat)
    return rates


def _closest_pair(a: np.ndarray):
    """(gap, alignment defect) of the most EP-like eigenvalue pair.

    Minimizes gap + defect rather than gap alone: particle-hole doubling can
    produce exactly degenerate pairs with orthogonal eigenvectors (defect 1)
    that would otherwise shadow a genuinely coalescing pair.
    """
    w, v = np.linalg.eig(a)
    v = v / np.linalg.norm(v, axis=0)
    n = w.size
    best = (np.inf, 1.0)
    for i in range(n):
        for j in range(i + 1, n):
            gap = abs(w[i] - w[j])
            defect = 1.0 - abs(np.vdot(v[:, i], v[:, j])) ** 2
            if gap + defect < best[0] + best[1]:
                best = (gap, defect)
    return best


def ep_scan(
    drift_at: Callable[[float], np.ndarray],
    grid: Sequence[float],
    gap_tol: float = EP_GAP_TOL,
    align_tol: float = EP_ALIGN_TOL,
) -> list[ExceptionalPoint]:
    """Scan a drift family for eigenvalue-and-eigenvector coalescence.

    A point qualifies only under the dual criterion: eigenvalue gap below
    ``gap_tol`` and eigenvector alignment defect 1 - |<v_i|v_j>|^2 below
    ``align_tol``. Candidates (local minima of gap + defect) are refined by
    golden-section search before the criterion is applied. Returns an empty
    list when nothing in range qualifies.
    """
    grid = np.asarray(grid, dtype=float)
    scores = np.array([sum(_closest_pair(drift_at(p))) for p in grid])
    eps: list[ExceptionalPoint] = []
    invphi = (np.sqrt(5) - 1) / 2
    for k in range(1, len(grid) - 1):
        if not (scores[k] <= scores[k - 1] and scores[k] <= scores[k + 1]):
            continue
        a, b = grid[k - 1], grid[k + 1]
        c, d = b - invphi * (b - a), a + invphi * (b - a)
        fc, fd = sum(_closest_pair(drift_at(c))), sum(_closest_pair(drift_at(d)))
        for _ in range(200):
            if fc < fd:
                b, d, fd = d, c, fc
                c = b - invphi * (b - a)
                fc = sum(_closest_pair(drift_at(c)))
            else:
                a, c, fc = c, d, fd
                d = a + invphi * (b - a)
                fd = sum(_closest_pair(drift_at(d)))
            # the gap scales as sqrt(|p - p_ep|) near a true EP, so the
            # interval must shrink to machine precision for the gap itself
            # to pass gap_tol
            if b - a < 4 * np.finfo(float).eps * max(abs(a), abs(b), 1.0):
                break
        p = 0.5 * (a + b)
        gap, defect = _closest_pair(drift_at(p))
        if gap < gap_tol and defect < align_tol:
            eps.append(ExceptionalPoint(parameter=float(p), gap=gap, alignment_defect=defect))
    return eps


def dimer_drift(j1: float, j2: float, kappa: float, eta: float) -> np.ndarray:
    """4x4 drift of the beam-splitter + parametric dimer with the pairing
    dissipator L = sqrt(2 kappa) (a + eta b^dag)."""
    return build_drift(build_dimer_bs_pa(j1, j2, kappa, eta)).a


def build_dimer_bs_pa(j1: float, j2: float, kappa: float, eta: float) -> QuadraticSystem:
    """Two modes with beam-splitter coupling j1, parametric coupling j2, and
    the pairing dissipator at rate 2 kappa on (a, b^dag)."""
    h = np.array([[0.0, j1], [j1, 0.0]], dtype=complex)
    p = np.array([[0.0, j2 / 2], [j2 / 2, 0.0]], dtype=complex)
    u = np.array([np.sqrt(2 * kappa), 0.0], dtype=complex)
    v = np.array([0.0, eta * np.sqrt(2 * kappa)], dtype=complex)
    from .core import JumpOperator

    return QuadraticSystem(h, jumps=(JumpOperator(u, v),), p=p)


def closed_form_thresholds(model: str, **params) -> dict:
    """Closed-form stability/EP thresholds for the few-mode models.

    model = "paramp_unbalanced_loss": params delta, lam, kappa, delta_kappa.
    Returns the instability verdict for a parametric pair with unbalanced
    loss: unstable iff (delta_kappa/kappa)^2 >= (kappa^2 + delta^2 - lam^2)
    / (kappa^2 + delta^2).

    model = "dimer_bs_pa": params j1, j2, kappa. Returns the exceptional
    point eta_ep = 1 - sqrt(2/kappa) (j1^2 - j2^2)^{1/4} and the instability
    threshold eta_inst = sqrt(j1^2 - j2^2) / (2 kappa) of the dimer built by
    :func:`build_dimer_bs_pa`. Domain error when j2^2 > j1^2.

    model = "three_mode": params j1, j2. Returns eta_c = min(|j1/j2|, |j2/j1|).
    """
    if model == "paramp_unbalanced_loss":
        delta, lam = params["delta"], params["lam"]
        kappa, dk = params["kappa"], params["delta_kappa"]
        lhs = (dk / kappa) ** 2 if kappa > 0 else np.inf
        rhs = (kappa**2 + delta**2 - lam**2) / (kappa**2 + delta**2)
        return {"unstable": bool(lhs >= rhs), "lhs": lhs, "rhs": rhs}
    if model == "dimer_bs_pa":
        j1, j2, kappa = params["j1"], params["j2"], params["kappa"]
        disc = j1**2 - j2**2
        if disc < 0:
            raise DissipairError("closed forms require j1^2 >= j2^2")
        s = np.sqrt(disc)
        return {
            "eta_ep": 1.0 - np.sqrt(2.0 / kappa) * s**0.5,
            "eta_instability": s / (2.0 * kappa),
        }
    if model == "three_mode":
        j1, j2 = params["j1"], params["j2"]
        if j1 == 0 or j2 == 0:
            return {"eta_c": 0.0}
        r = abs(j1 / j2)
        return {"eta_c": min(r, 1.0 / r)}
    raise DissipairError(f"unknown model {model!r}")
