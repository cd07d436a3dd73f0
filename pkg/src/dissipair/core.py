"""Model data types and first/second-moment generators.

A model is a quadratic Hamiltonian ``h`` (number conserving, units of the
hopping scale J) plus optional non-number-conserving pairing terms ``p``
and a list of linear jump operators L = sum_i u_i a_i + v_i a_i^dag.

Conventions
-----------
Quadratures x_i = (a_i + a_i^dag)/sqrt(2), p_i = -i(a_i - a_i^dag)/sqrt(2),
ordered (x_1..x_N, p_1..p_N); vacuum covariance V = I/2.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DissipairError

__all__ = [
    "JumpOperator",
    "QuadraticSystem",
    "BdgMatrix",
    "CovarianceState",
    "LocalLossFrame",
    "canonical_pairing",
    "uncorrelated_pair",
    "build_drift",
    "build_diffusion",
    "to_quadrature_basis",
    "quadrature_transform",
    "symplectic_form",
    "local_loss_frame",
    "symplectic_eigenvalues",
]

HERMITICITY_RTOL = 1e-12
HERMITICITY_WARN = 1e-10


@dataclass(frozen=True)
class JumpOperator:
    """Linear jump operator L = sum_i u_i a_i + v_i a_i^dag.

    Parameters
    ----------
    u : ndarray
        Length-N complex annihilation coefficients, units sqrt(rate).
    v : ndarray
        Length-N complex creation coefficients, units sqrt(rate).
    """

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=complex)
        v = np.asarray(self.v, dtype=complex)
        if u.ndim != 1 or v.shape != u.shape:
            raise DissipairError("jump coefficient vectors must be 1-d and equal length")
        if not (np.any(u) or np.any(v)):
            raise DissipairError("jump operator must have a nonzero coefficient")
        u.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def n_modes(self) -> int:
        return self.u.shape[0]


def canonical_pairing(n: int, site0: int, site1: int, eta: float, kappa: float) -> JumpOperator:
    """Pairing dissipator L = sqrt(kappa) (a_{site0} + eta a_{site1}^dag)."""
    if not 0 <= site0 < n or not 0 <= site1 < n:
        raise DissipairError("dissipator sites out of range")
    if kappa <= 0:
        raise DissipairError("kappa must be positive")
    u = np.zeros(n, dtype=complex)
    v = np.zeros(n, dtype=complex)
    u[site0] = np.sqrt(kappa)
    v[site1] = eta * np.sqrt(kappa)
    return JumpOperator(u, v)


def uncorrelated_pair(n: int, site0: int, site1: int, eta: float, kappa: float) -> list[JumpOperator]:
    """Incoherent comparator: separate loss sqrt(kappa) a_{site0} and gain
    eta sqrt(kappa) a_{site1}^dag."""
    loss = canonical_pairing(n, site0, site1, 0.0, kappa)
    v = np.zeros(n, dtype=complex)
    v[site1] = eta * np.sqrt(kappa)
    return [JumpOperator(loss.u, loss.v), JumpOperator(np.zeros(n, dtype=complex), v)]


@dataclass(frozen=True)
class QuadraticSystem:
    """Quadratic bosonic model: Hermitian hopping ``h``, optional pairing
    ``p`` (coefficient of a_i^dag a_j^dag + h.c., symmetric), jump list.

    ``h`` is symmetrized on construction; a correction larger than 1e-10
    (relative Frobenius) triggers a warning.
    """

    h: np.ndarray
    jumps: tuple[JumpOperator, ...] = ()
    p: np.ndarray | None = None
    geometry: "object | None" = field(default=None, compare=False)

    def __post_init__(self):
        h = np.asarray(self.h, dtype=complex)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise DissipairError("h must be square")
        herm = 0.5 * (h + h.conj().T)
        scale = max(np.linalg.norm(h), 1.0)
        if np.linalg.norm(h - herm) > HERMITICITY_WARN * scale:
            warnings.warn("hopping matrix symmetrized; correction exceeds 1e-10", stacklevel=2)
        herm.setflags(write=False)
        object.__setattr__(self, "h", herm)
        jumps = tuple(self.jumps)
        for j in jumps:
            if j.n_modes != h.shape[0]:
                raise DissipairError("jump operator length does not match mode count")
        object.__setattr__(self, "jumps", jumps)
        if self.p is not None:
            p = np.asarray(self.p, dtype=complex)
            if p.shape != h.shape:
                raise DissipairError("pairing matrix shape mismatch")
            p = 0.5 * (p + p.T)
            p.setflags(write=False)
            object.__setattr__(self, "p", p)

    @property
    def n_modes(self) -> int:
        return self.h.shape[0]

    def with_jumps(self, jumps) -> "QuadraticSystem":
        return replace(self, jumps=tuple(jumps))


DOUBLED_MODE = "doubled_mode"
QUADRATURE = "quadrature"


@dataclass(frozen=True)
class BdgMatrix:
    """2N x 2N first-moment drift matrix.

    In the ``doubled_mode`` basis it acts on (<a_1>..<a_N>, <a_1^dag>..<a_N^dag>)
    and has particle-hole structure: A[N:, N:] = conj(A[:N, :N]) and
    A[N:, :N] = conj(A[:N, N:]).
    """

    a: np.ndarray
    basis: str = DOUBLED_MODE

    def __post_init__(self):
        a = np.asarray(self.a, dtype=complex if self.basis == DOUBLED_MODE else float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] % 2:
            raise DissipairError("drift matrix must be 2N x 2N")
        a.setflags(write=False)
        object.__setattr__(self, "a", a)
        if self.basis not in (DOUBLED_MODE, QUADRATURE):
            raise DissipairError("unknown basis tag")

    @property
    def n_modes(self) -> int:
        return self.a.shape[0] // 2


def build_drift(system: QuadraticSystem) -> BdgMatrix:
    """Drift matrix A with d/dt (<a>, <a^dag>) = A (<a>, <a^dag>).

    Contains -i h on the diagonal blocks, -2i p on the off-diagonal block,
    plus damping/anti-damping/pairing contributions from each jump.
    """
    n = system.n_modes
    aaa = -1j * system.h
    aab = np.zeros((n, n), dtype=complex)
    if system.p is not None:
        aab = aab - 2j * system.p
    for jump in system.jumps:
        u, v = jump.u, jump.v
        aaa = aaa + 0.5 * (np.outer(v, v.conj()) - np.outer(u.conj(), u))
        aab = aab + 0.5 * (np.outer(v, u.conj()) - np.outer(u.conj(), v))
    a = np.empty((2 * n, 2 * n), dtype=complex)
    a[:n, :n] = aaa
    a[:n, n:] = aab
    a[n:, :n] = aab.conj()
    a[n:, n:] = aaa.conj()
    return BdgMatrix(a, DOUBLED_MODE)


def quadrature_transform(n: int) -> np.ndarray:
    """Unitary T mapping (a, a^dag) to (x, p): (x, p) = T (a, a^dag)."""
    eye = np.eye(n)
    return np.block([[eye, eye], [-1j * eye, 1j * eye]]) / np.sqrt(2)


def to_quadrature_basis(bdg: BdgMatrix) -> BdgMatrix:
    """Similarity transform of the drift to the (x, p) basis; real output."""
    if bdg.basis != DOUBLED_MODE:
        raise DissipairError("expected a doubled_mode drift matrix")
    n = bdg.n_modes
    t = quadrature_transform(n)
    aq = t @ bdg.a @ t.conj().T
    if np.abs(aq.imag).max() > 1e-10 * max(np.abs(aq.real).max(), 1.0):
        raise DissipairError("drift lacks particle-hole structure; quadrature form not real")
    return BdgMatrix(aq.real, QUADRATURE)


def symplectic_form(n: int) -> np.ndarray:
    """Standard symplectic form Omega in (x_1..x_N, p_1..p_N) ordering."""
    omega = np.zeros((2 * n, 2 * n))
    omega[:n, n:] = np.eye(n)
    omega[n:, :n] = -np.eye(n)
    return omega


def build_diffusion(system: QuadraticSystem) -> np.ndarray:
    """Quadrature diffusion matrix D_q closing dV/dt = A_q V + V A_q^T + D_q.

    For each jump L = c . (a, a^dag), the quadrature row vector is
    c_q = ((u+v)/sqrt(2), i(u-v)/sqrt(2)) and D_q = Omega Re(C) Omega^T with
    C = sum_L conj(c_q) c_q^T.
    """
    n = system.n_modes
    c = np.zeros((2 * n, 2 * n), dtype=complex)
    for jump in system.jumps:
        cq = np.concatenate([(jump.u + jump.v) / np.sqrt(2), 1j * (jump.u - jump.v) / np.sqrt(2)])
        c += np.outer(cq.conj(), cq)
    omega = symplectic_form(n)
    return omega @ c.real @ omega.T


@dataclass(frozen=True)
class CovarianceState:
    """Quadrature covariance V (2N x 2N real symmetric, vacuum = I/2)."""

    v: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.v, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] % 2:
            raise DissipairError("covariance must be 2N x 2N")
        scale = max(np.abs(v).max(), 1.0)
        if np.abs(v - v.T).max() > 1e-10 * scale:
            raise DissipairError("covariance not symmetric")
        v = 0.5 * (v + v.T)
        v.setflags(write=False)
        object.__setattr__(self, "v", v)

    @property
    def n_modes(self) -> int:
        return self.v.shape[0] // 2

    def normal_block(self) -> np.ndarray:
        """N_ij = <a_i^dag a_j>."""
        n = self.n_modes
        vxx, vpp, vxp = self.v[:n, :n], self.v[n:, n:], self.v[:n, n:]
        re_n = 0.5 * (vxx + vpp) - 0.5 * np.eye(n)
        im_n = 0.5 * (vxp - vxp.T)
        return re_n + 1j * im_n

    def anomalous_block(self) -> np.ndarray:
        """M_ij = <a_i a_j>."""
        n = self.n_modes
        vxx, vpp, vxp = self.v[:n, :n], self.v[n:, n:], self.v[:n, n:]
        re_m = 0.5 * (vxx - vpp)
        im_m = 0.5 * (vxp + vxp.T)
        return re_m + 1j * im_m

    @classmethod
    def from_moments(cls, normal: np.ndarray, anomalous: np.ndarray) -> "CovarianceState":
        """Assemble V from N = <a^dag a> and M = <aa> blocks."""
        n = normal.shape[0]
        eye = np.eye(n)
        vxx = 0.5 * eye + normal.real + anomalous.real
        vpp = 0.5 * eye + normal.real - anomalous.real
        vxp = normal.imag + anomalous.imag
        vpx = anomalous.imag - normal.imag
        return cls(np.block([[vxx, vxp], [vpx, vpp]]))

    def check_physical(self, tol: float = 1e-8) -> None:
        """Verify V + (i/2) Omega >= 0 (eigenvalues >= -tol)."""
        omega = symplectic_form(self.n_modes)
        w = np.linalg.eigvalsh(self.v + 0.5j * omega)
        if w.min() < -tol:
            raise DissipairError(f"covariance violates the uncertainty bound: min eig {w.min():.3e}")


def symplectic_eigenvalues(v: np.ndarray) -> np.ndarray:
    """Symplectic eigenvalues of a covariance matrix (1/2 each for pure states).

    Uses the matrix square root route: nu_k are the singular values of
    sqrt(V) Omega sqrt(V), taken once per pair.
    """
    n = v.shape[0] // 2
    w, q = np.linalg.eigh(v)
    s = (q * np.sqrt(np.maximum(w, 0.0))) @ q.T
    omega = symplectic_form(n)
    return np.linalg.svd(s @ omega @ s, compute_uv=False)[::2]


@dataclass(frozen=True)
class LocalLossFrame:
    """Two-mode Bogoliubov frame in which L = sqrt(kappa (1 - eta^2)) a'.

    ``symplectic`` is the 4x4 quadrature transform (x_a, x_b, p_a, p_b
    ordering as (x_1, x_2, p_1, p_2)); ``loss_scale`` multiplies sqrt(kappa);
    ``pairing_coefficient`` is the induced a'b' + h.c. strength per unit
    detuning when Delta (a^dag a + b^dag b) is transported to the new frame.
    """

    eta: float
    symplectic: np.ndarray
    loss_scale: float
    pairing_coefficient: float

    def transform_modes(self) -> np.ndarray:
        """2x2 blocks (mu, nu) with a' = mu a + nu b^dag, b' = mu b + nu a^dag."""
        ch = 1.0 / np.sqrt(1.0 - self.eta**2)
        sh = self.eta * ch
        return np.array([[ch, sh], [sh, ch]])


def local_loss_frame(eta: float) -> LocalLossFrame:
    """Frame change absorbing the pairing dissipator into plain local loss.

    a' = cosh(r) a + sinh(r) b^dag with tanh(r) = eta, so
    L = sqrt(kappa)(a + eta b^dag) = sqrt(kappa (1 - eta^2)) a'.
    """
    if not 0.0 <= eta < 1.0:
        raise DissipairError("eta must lie in [0, 1)")
    ch = 1.0 / np.sqrt(1.0 - eta**2)
    sh = eta * ch
    # quadrature action: x_a' = ch x_a + sh x_b, p_a' = ch p_a - sh p_b, a<->b
    s = np.array(
        [
            [ch, sh, 0.0, 0.0],
            [sh, ch, 0.0, 0.0],
            [0.0, 0.0, ch, -sh],
            [0.0, 0.0, -sh, ch],
        ]
    )
    return LocalLossFrame(
        eta=eta,
        symplectic=s,
        loss_scale=np.sqrt(1.0 - eta**2),
        pairing_coefficient=2.0 * eta / (1.0 - eta**2),
    )
