"""Gaussian entanglement entropy, bipartitions, disorder sweeps, orderings."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import CovarianceState, canonical_pairing, symplectic_form
from .errors import DissipairError, UnstableError
from .lattices import LatticeGeometry, build_ssh, eigenpairs
from .steady import bogoliubov_steady_state, observables

__all__ = [
    "Bipartition",
    "DisorderSweepResult",
    "entanglement_entropy",
    "mutual_information",
    "angled_bipartitions",
    "volume_law_fit",
    "edge_localization",
    "disorder_sweep",
    "spiral_order",
    "line_cut",
]

NU_CLAMP = 1e-9


@dataclass(frozen=True)
class Bipartition:
    """Subsystem A given as a tuple of site indices, with a descriptor
    (cut angle for line-through-center cuts, or "explicit")."""

    sites: tuple[int, ...]
    descriptor: str = "explicit"

    def __post_init__(self):
        sites = tuple(int(s) for s in self.sites)
        if not sites:
            raise DissipairError("bipartition must be nonempty")
        if len(set(sites)) != len(sites):
            raise DissipairError("duplicate sites in bipartition")
        object.__setattr__(self, "sites", sites)


@dataclass(frozen=True)
class DisorderSweepResult:
    """Mean and standard error of the edge-localization factor on an
    (alpha, sigma) grid, over ``realizations`` seeded draws each."""

    alphas: np.ndarray
    sigmas: np.ndarray
    mean_s: np.ndarray
    stderr_s: np.ndarray
    unstable_counts: np.ndarray
    realizations: int
    seed: int


def _reduced_symplectic_eigenvalues(v: np.ndarray, sites, n: int) -> np.ndarray:
    idx = np.array(list(sites) + [n + s for s in sites])
    vr = v[np.ix_(idx, idx)]
    m = len(sites)
    w, q = np.linalg.eigh(vr)
    s = (q * np.sqrt(np.maximum(w, 0.0))) @ q.T
    omega = symplectic_form(m)
    return np.linalg.svd(s @ omega @ s, compute_uv=False)[::2]


def _entropy_from_nus(nus: np.ndarray) -> float:
    if nus.size and nus.min() < 0.5 - NU_CLAMP:
        raise DissipairError(f"unphysical reduction: symplectic eigenvalue {nus.min():.6f} < 1/2")
    nus = np.maximum(nus, 0.5)
    a = nus + 0.5
    b = nus - 0.5
    ent = np.sum(a * np.log(a))
    mask = b > 1e-14
    ent -= np.sum(b[mask] * np.log(b[mask]))
    return float(ent)


def entanglement_entropy(cov: CovarianceState, part: Bipartition) -> float:
    """Von Neumann entropy (nats) of the reduced Gaussian state on ``part``."""
    n = cov.n_modes
    if any(not 0 <= s < n for s in part.sites):
        raise DissipairError("bipartition site out of range")
    if len(part.sites) >= n:
        raise DissipairError("bipartition must be a proper subset")
    nus = _reduced_symplectic_eigenvalues(cov.v, part.sites, n)
    return _entropy_from_nus(nus)


def mutual_information(cov: CovarianceState, sites_a, sites_b) -> float:
    """I(A:B) = S(A) + S(B) - S(AB) in nats; A and B must be disjoint."""
    a = tuple(sites_a)
    b = tuple(sites_b)
    if set(a) & set(b):
        raise DissipairError("regions must be disjoint")
    n = cov.n_modes
    sa = _entropy_from_nus(_reduced_symplectic_eigenvalues(cov.v, a, n))
    sb = _entropy_from_nus(_reduced_symplectic_eigenvalues(cov.v, b, n))
    sab = _entropy_from_nus(_reduced_symplectic_eigenvalues(cov.v, a + b, n))
    return sa + sb - sab


def angled_bipartitions(geometry: LatticeGeometry, count: int) -> list[Bipartition]:
    """Cuts by lines through the lattice center at angles theta_i = pi i / count.

    Sites go to side A when their signed distance to the line is positive;
    ties (distance below 1e-12) also go to side A.
    """
    if geometry.kind not in ("square_open", "square_cylinder"):
        raise DissipairError("angled bipartitions require a square geometry")
    nx, ny = geometry.dims
    ci, cj = (nx - 1) / 2, (ny - 1) / 2
    coords = np.array([(i, j) for i in range(nx) for j in range(ny)], dtype=float)
    parts = []
    for m in range(count):
        theta = np.pi * m / count
        d = (coords[:, 0] - ci) * np.sin(theta) - (coords[:, 1] - cj) * np.cos(theta)
        side_a = np.nonzero(d > -1e-12)[0]
        parts.append(Bipartition(tuple(int(s) for s in side_a), descriptor=f"theta={theta:.6f}"))
    return parts


def volume_law_fit(sizes, entropies):
    """Least-squares line of mean entropy vs. edge-site count 4(N-1).

    Returns (slope, intercept, r_squared).
    """
    x = 4.0 * (np.asarray(sizes, dtype=float) - 1.0)
    y = np.asarray(entropies, dtype=float)
    if x.size < 3:
        raise DissipairError("need at least 3 sizes")
    if np.ptp(x) == 0:
        raise DissipairError("degenerate size values")
    a = np.vstack([x, np.ones_like(x)]).T
    coef, resid, *_ = np.linalg.lstsq(a, y, rcond=None)
    ss_tot = ((y - y.mean()) ** 2).sum()
    r2 = 1.0 - float(resid[0]) / ss_tot if resid.size and ss_tot > 0 else 1.0
    return float(coef[0]), float(coef[1]), r2


def edge_localization(densities: np.ndarray) -> float:
    """Symmetrized edge-localization factor in [0, 1]:

    S = (1/n_tot) sum_i sqrt(n_i n_{N-1-i}) (1 - 4 i (N - i) / N^2).
    """
    n = np.asarray(densities, dtype=float)
    total = n.sum()
    if total <= 0:
        raise DissipairError("all-zero density")
    size = n.shape[0]
    i = np.arange(size, dtype=float)
    weight = 1.0 - 4.0 * i * (size - i) / size**2
    return float(np.sum(np.sqrt(n * n[::-1]) * weight) / total)


def disorder_sweep(
    n: int,
    alphas,
    sigmas,
    realizations: int = 100,
    seed: int = 0,
    site0: int = 2,
    site1: int = 0,
    eta_ratio: float = 0.99,
    kappa: float = 1.0,
    j: float = 1.0,
) -> DisorderSweepResult:
    """Edge-localization factor of disordered staggered chains.

    For each (alpha, sigma) draws ``realizations`` chains with independent
    counter-based seeds, recomputes the critical imbalance per realization,
    and evaluates the steady state at eta = eta_ratio * eta_c. Realizations
    that are unstable or too degenerate are skipped and counted; a grid
    point with more than half its realizations skipped raises.
    """
    alphas = np.asarray(alphas, dtype=float)
    sigmas = np.asarray(sigmas, dtype=float)
    mean_s = np.zeros((alphas.size, sigmas.size))
    stderr_s = np.zeros_like(mean_s)
    unstable = np.zeros(mean_s.shape, dtype=int)
    for ia, alpha in enumerate(alphas):
        for isg, sigma in enumerate(sigmas):
            vals = []
            for r in range(realizations):
                sys_r = build_ssh(n, alpha, j=j, sigma=sigma, seed=[seed, ia, isg, r])
                try:
                    modes = eigenpairs(sys_r)
                    ratios = modes.all_ratios(site0, site1)
                    eta_c = float(ratios[np.isfinite(ratios)].min())
                    jump = canonical_pairing(n, site0, site1, eta_ratio * eta_c, kappa)
                    cov, _ = bogoliubov_steady_state(modes, jump, degenerate="project")
                    vals.append(edge_localization(observables(cov).density))
                except (UnstableError, DissipairError, ValueError):
                    unstable[ia, isg] += 1
            if len(vals) < realizations / 2:
                raise UnstableError(
                    f"more than half the realizations failed at alpha={alpha}, sigma={sigma}"
                )
            arr = np.array(vals)
            mean_s[ia, isg] = arr.mean()
            stderr_s[ia, isg] = arr.std(ddof=1) / np.sqrt(arr.size) if arr.size > 1 else 0.0
    return DisorderSweepResult(
        alphas=alphas,
        sigmas=sigmas,
        mean_s=mean_s,
        stderr_s=stderr_s,
        unstable_counts=unstable,
        realizations=realizations,
        seed=seed,
    )


def spiral_order(geometry: LatticeGeometry) -> np.ndarray:
    """Clockwise spiral enumeration of an N x N lattice from the upper-left
    corner inward; the first 4(N-1) entries are exactly the boundary sites."""
    if geometry.kind != "square_open" or geometry.dims[0] != geometry.dims[1]:
        raise DissipairError("spiral ordering requires an open square lattice")
    n = geometry.dims[0]
    order = []
    top, bottom, left, right = 0, n - 1, 0, n - 1
    while top <= bottom and left <= right:
        for j in range(left, right + 1):
            order.append(top * n + j)
        for i in range(top + 1, bottom + 1):
            order.append(i * n + right)
        if top < bottom:
            for j in range(right - 1, left - 1, -1):
                order.append(bottom * n + j)
        if left < right:
            for i in range(bottom - 1, top, -1):
                order.append(i * n + left)
        top += 1
        bottom -= 1
        left += 1
        right -= 1
    return np.array(order, dtype=int)


def line_cut(cov: CovarianceState, geometry: LatticeGeometry, path: str, index: int = 0, ref_site=None):
    """Densities and correlation magnitudes along a path.

    ``path="row"``: sites (index, j) for all j. ``path="edge"``: the boundary
    prefix of the spiral ordering. Returns (site_indices, density,
    |<a_ref^dag a>|, |<a_ref a>|) with ref_site defaulting to the first path
    site.
    """
    if geometry.kind not in ("square_open", "square_cylinder"):
        raise DissipairError("line cuts require a square geometry")
    nx, ny = geometry.dims
    if path == "row":
        if not 0 <= index < nx:
            raise DissipairError("row index out of bounds")
        sites = np.array([geometry.site_index((index, j)) for j in range(ny)])
    elif path == "edge":
        sites = spiral_order(geometry)[: 4 * (nx - 1)]
    else:
        raise DissipairError("path must be 'row' or 'edge'")
    normal = cov.normal_block()
    anomalous = cov.anomalous_block()
    ref = int(sites[0]) if ref_site is None else (
        geometry.site_index(ref_site) if not np.isscalar(ref_site) else int(ref_site)
    )
    density = np.maximum(normal.diagonal().real[sites], 0.0)
    corr_n = np.abs(normal[ref, sites])
    corr_a = np.abs(anomalous[ref, sites])
    return sites, density, corr_n, corr_a
