"""Lattice Hamiltonian builders, chiral symmetry checks, and eigenmode sets.

Models: a three-mode chain, the staggered-hopping (SSH-type) chain with
optional bond disorder, and the quarter-flux square lattice (open or
cylinder geometry). All builders return a :class:`~dissipair.core.QuadraticSystem`
without jump operators; attach dissipators with ``system.with_jumps``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import QuadraticSystem
from .errors import ChiralSymmetryError, DissipairError

__all__ = [
    "LatticeGeometry",
    "EigenmodeSet",
    "build_three_mode",
    "build_ssh",
    "build_hofstadter",
    "check_chiral",
    "eigenpairs",
    "cylinder_bands",
]

CHAIN = "chain"
SQUARE_OPEN = "square_open"
SQUARE_CYLINDER = "square_cylinder"


@dataclass(frozen=True)
class LatticeGeometry:
    """Site bookkeeping for a lattice.

    ``kind`` is one of chain, square_open, square_cylinder. Square lattices
    use row-major flat indexing: site (i, j) -> i * ny + j. For the cylinder
    the second coordinate (j) wraps; the two open edges sit at i = 0 and
    i = nx - 1. This wrapping convention is part of the geometry contract.
    """

    kind: str
    dims: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in (CHAIN, SQUARE_OPEN, SQUARE_CYLINDER):
            raise DissipairError(f"unknown geometry kind {self.kind!r}")
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))

    @property
    def n_sites(self) -> int:
        n = 1
        for d in self.dims:
            n *= d
        return n

    def site_index(self, coord) -> int:
        if self.kind == CHAIN:
            (i,) = (coord,) if np.isscalar(coord) else tuple(coord)
            if not 0 <= i < self.dims[0]:
                raise DissipairError("chain coordinate out of range")
            return int(i)
        i, j = coord
        nx, ny = self.dims
        if self.kind == SQUARE_CYLINDER:
            j = j % ny
        if not (0 <= i < nx and 0 <= j < ny):
            raise DissipairError("square coordinate out of range")
        return int(i) * ny + int(j)

    def coord(self, index: int):
        if not 0 <= index < self.n_sites:
            raise DissipairError("site index out of range")
        if self.kind == CHAIN:
            return (index,)
        ny = self.dims[1]
        return (index // ny, index % ny)


@dataclass(frozen=True)
class EigenmodeSet:
    """Chiral-paired eigenmodes of a bipartite hopping Hamiltonian.

    ``psi`` columns hold the positive-energy mode functions (one per energy
    in ``energies``); the negative-energy partner of column alpha is
    ``sublattice_sign * psi[:, alpha]``. ``zero_modes`` columns have energy
    zero. Mode functions follow the convention in which site amplitudes are
    the complex conjugates of the orthonormal eigenvector entries; global
    phases are fixed by making each column's largest-magnitude component
    real positive.
    """

    energies: np.ndarray
    psi: np.ndarray
    zero_modes: np.ndarray
    sublattice_sign: np.ndarray

    @property
    def n_sites(self) -> int:
        return self.sublattice_sign.shape[0]

    def partner(self, alpha: int) -> np.ndarray:
        """Mode function of the -energies[alpha] eigenmode."""
        return self.sublattice_sign * self.psi[:, alpha]

    def all_ratios(self, site0: int, site1: int) -> np.ndarray:
        """|psi[site0] / psi[site1]| over positive and zero modes, with
        modes of negligible site1 amplitude reported as inf."""
        cols = np.concatenate([self.psi, self.zero_modes], axis=1) if self.zero_modes.size else self.psi
        num = np.abs(cols[site0, :])
        den = np.abs(cols[site1, :])
        out = np.full(num.shape, np.inf)
        mask = den > 1e-14
        out[mask] = num[mask] / den[mask]
        return out


def build_three_mode(j1: float, j2: float) -> QuadraticSystem:
    """Three-site chain H = j1 (a^dag b + h.c.) + j2 (b^dag c + h.c.)."""
    h = np.array([[0, j1, 0], [j1, 0, j2], [0, j2, 0]], dtype=complex)
    return QuadraticSystem(h, geometry=LatticeGeometry(CHAIN, (3,)))


def build_ssh(
    n: int,
    alpha: float,
    j: float = 1.0,
    sigma: float = 0.0,
    seed=None,
    convention: str = "plus",
) -> QuadraticSystem:
    """Staggered-hopping chain with optional Gaussian bond disorder.

    Bond i (0-indexed, joining sites i and i+1) has strength
    j * (1 + (-1)^i alpha) + J_i under the default "plus" convention, or
    j * (1 - (-1)^i alpha) + J_i under "minus"; J_i ~ N(0, sigma^2) drawn
    deterministically from ``seed``.
    """
    if n < 2:
        raise DissipairError("need at least two sites")
    if abs(alpha) >= 1:
        raise DissipairError("|alpha| must be < 1")
    if convention not in ("plus", "minus"):
        raise DissipairError("convention must be 'plus' or 'minus'")
    s = 1.0 if convention == "plus" else -1.0
    bonds = j * (1.0 + s * alpha * (-1.0) ** np.arange(n - 1))
    if sigma > 0:
        rng = np.random.default_rng(seed)
        bonds = bonds + rng.normal(0.0, sigma, size=n - 1)
    h = np.zeros((n, n), dtype=complex)
    idx = np.arange(n - 1)
    h[idx, idx + 1] = bonds
    h[idx + 1, idx] = bonds
    return QuadraticSystem(h, geometry=LatticeGeometry(CHAIN, (n,)))


def build_hofstadter(nx: int, ny: int, geometry: str = "open") -> QuadraticSystem:
    """Quarter-flux square lattice in Landau gauge.

    x-bonds (i,j)-(i+1,j) carry amplitude 1; y-bonds (i,j)-(i,j+1) carry the
    Peierls phase exp(i pi i / 2), giving flux pi/2 per plaquette. The
    cylinder wraps the j coordinate with the same phase rule.
    """
    if nx < 4 or ny < 4:
        raise DissipairError("need at least 4 sites per direction")
    if geometry not in ("open", "cylinder"):
        raise DissipairError("geometry must be 'open' or 'cylinder'")
    n = nx * ny
    h = np.zeros((n, n), dtype=complex)
    idx = lambda i, j: i * ny + j
    for i in range(nx):
        phase = np.exp(1j * np.pi * i / 2)
        for j in range(ny):
            if i + 1 < nx:
                h[idx(i, j), idx(i + 1, j)] += 1.0
            if j + 1 < ny:
                h[idx(i, j), idx(i, j + 1)] += phase
            elif geometry == "cylinder":
                h[idx(i, j), idx(i, 0)] += phase
    h = h + h.conj().T
    kind = SQUARE_OPEN if geometry == "open" else SQUARE_CYLINDER
    return QuadraticSystem(h, geometry=LatticeGeometry(kind, (nx, ny)))


def check_chiral(system: QuadraticSystem) -> np.ndarray:
    """Two-color the hopping graph; returns a +-1 site vector with hopping
    only between opposite signs.

    Raises :class:`ChiralSymmetryError` with a witness edge (i, j) if some
    bond connects sites forced to the same color.
    """
    h = system.h
    n = system.n_modes
    tol = 1e-12 * max(np.abs(h).max(), 1.0)
    adj = [np.nonzero(np.abs(h[i]) > tol)[0] for i in range(n)]
    color = np.zeros(n, dtype=int)
    for start in range(n):
        if color[start] or not len(adj[start]):
            continue
        color[start] = 1
        stack = [start]
        while stack:
            i = stack.pop()
            for k in adj[i]:
                if k == i:
                    raise ChiralSymmetryError(f"diagonal term at site {i}", witness=(i, i))
                if color[k] == 0:
                    color[k] = -color[i]
                    stack.append(k)
                elif color[k] == color[i]:
                    raise ChiralSymmetryError(
                        f"bond ({i}, {k}) connects same-sublattice sites", witness=(i, k)
                    )
    color[color == 0] = 1  # isolated sites: arbitrary color
    return color.astype(float)


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real positive."""
    out = vecs.copy()
    for k in range(out.shape[1]):
        i = np.argmax(np.abs(out[:, k]))
        z = out[i, k]
        if abs(z) > 0:
            out[:, k] *= np.conj(z) / abs(z)
    return out


def eigenpairs(system: QuadraticSystem, degeneracy_tol: float = 1e-8) -> EigenmodeSet:
    """Diagonalize a chiral Hamiltonian into +-energy mode pairs.

    Positive-energy columns are returned in ascending energy order; the
    negative partner psi_{-alpha} = sign * psi_alpha is validated against
    the -energy eigenspace. Zero modes (|energy| < degeneracy_tol * ||H||)
    are returned separately.
    """
    sign = check_chiral(system)
    w, vecs = np.linalg.eigh(system.h)
    scale = max(np.abs(w).max(), 1.0)
    ztol = degeneracy_tol * scale
    psis = _fix_phases(vecs.conj())
    pos = np.nonzero(w > ztol)[0]
    zero = np.nonzero(np.abs(w) <= ztol)[0]
    energies = w[pos]
    psi = psis[:, pos]
    # validate the chiral pairing: sign * psi must be an eigenvector at -energy
    h = system.h
    for k in range(psi.shape[1]):
        pm = sign * psi[:, k]
        resid = np.linalg.norm(h @ pm.conj() + energies[k] * pm.conj())
        if resid > 1e-8 * scale:
            raise ChiralSymmetryError(
                f"chiral partner of mode {k} is not a -energy eigenvector (residual {resid:.2e})"
            )
    # energies come in +- pairs: every positive energy must appear negated
    wneg = np.sort(-w[w < -ztol])
    if wneg.shape != energies.shape or (energies.size and np.abs(np.sort(energies) - wneg).max() > ztol * 10):
        raise ChiralSymmetryError("spectrum is not symmetric about zero")
    return EigenmodeSet(
        energies=energies,
        psi=psi,
        zero_modes=psis[:, zero],
        sublattice_sign=sign,
    )


def cylinder_bands(system: QuadraticSystem):
    """Per-momentum bands of a quarter-flux cylinder.

    Fourier-reduces the wrapped (j) direction. Returns (k values, energies,
    mean_distance) where energies[m, :] are the nx eigenvalues at
    k_m = 2 pi m / ny and mean_distance[m, :] = <|i - (nx-1)/2|> for each
    eigenvector (distance of the mode from the cylinder center).
    """
    geom = system.geometry
    if geom is None or geom.kind != SQUARE_CYLINDER:
        raise DissipairError("cylinder_bands requires a square_cylinder system")
    nx, ny = geom.dims
    ks = 2 * np.pi * np.arange(ny) / ny
    energies = np.empty((ny, nx))
    mean_x = np.empty((ny, nx))
    center = (nx - 1) / 2
    dist = np.abs(np.arange(nx) - center)
    for m, k in enumerate(ks):
        hk = np.zeros((nx, nx), dtype=complex)
        for i in range(nx):
            hk[i, i] = 2 * np.cos(k + np.pi * i / 2)
            if i + 1 < nx:
                hk[i, i + 1] = 1.0
                hk[i + 1, i] = 1.0
        w, v = np.linalg.eigh(hk)
        energies[m] = w
        mean_x[m] = dist @ (np.abs(v) ** 2)
    return ks, energies, mean_x
