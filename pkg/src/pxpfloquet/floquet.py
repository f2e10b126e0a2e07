"""One-period evolution operator, quasienergy spectra and stroboscopic evolution."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse

from .basis import ConstrainedBasis, SectorBasis
from .operators import DriveProtocol, build_h_spin

DENSE_LIMIT = 20_000
BRANCH_EDGE_TOL = 1e-6


class EigensolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class EvolutionOperator:
    """Unitary one-period evolution operator U(T, 0)."""

    matrix: np.ndarray
    protocol: DriveProtocol
    basis_tag: str

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class FloquetSpectrum:
    """Quasienergies on the principal branch and Floquet eigenvectors.

    Quasienergies E_F lie in (-omega/2, omega/2] and are sorted ascending;
    eigenvector columns are orthonormal (Schur vectors of U).
    """

    quasienergies: np.ndarray
    eigenvectors: np.ndarray
    omega: float
    basis_tag: str

    @property
    def dim(self) -> int:
        return len(self.quasienergies)

    @property
    def period(self) -> float:
        return 2.0 * np.pi / self.omega

    def branch_edge_flag(self) -> bool:
        """True when some eigenphase sits within 1e-6 of the branch cut."""
        theta = self.quasienergies * self.period
        return bool(np.any(np.abs(theta) > np.pi - BRANCH_EDGE_TOL))


def _dense(mat) -> np.ndarray:
    if scipy.sparse.issparse(mat):
        return mat.toarray()
    return np.asarray(mat)


def build_floquet_operator(basis_or_sector, protocol: DriveProtocol) -> EvolutionOperator:
    """U(T, 0) = exp(-i H[+lam] T/2) exp(-i H[-lam] T/2).

    Both half-period propagators are computed through the spectral
    decompositions of the static Hamiltonians H(+-lambda), not by
    time-stepping.
    """
    if isinstance(basis_or_sector, SectorBasis):
        tag = f"sector({basis_or_sector.sector.tag})"
    elif isinstance(basis_or_sector, ConstrainedBasis):
        tag = "full"
    else:
        raise TypeError("expected a ConstrainedBasis or SectorBasis")

    half = 0.5 * protocol.period
    u = None
    for sign in (-1.0, +1.0):  # first half of the cycle applied first
        ham = _dense(build_h_spin(basis_or_sector, protocol.w, sign * protocol.lam))
        if ham.shape[0] > DENSE_LIMIT:
            raise ValueError(f"dimension {ham.shape[0]} exceeds dense limit {DENSE_LIMIT}")
        try:
            eps, vec = scipy.linalg.eigh(ham)
        except scipy.linalg.LinAlgError as exc:
            raise EigensolverError(
                f"eigh failed for {tag}, w={protocol.w}, lam={sign * protocol.lam}"
            ) from exc
        phases = np.exp(-1j * eps * half)
        u_half = (vec * phases) @ vec.conj().T
        u = u_half if u is None else u_half @ u
    return EvolutionOperator(matrix=u, protocol=protocol, basis_tag=tag)


def unitarity_residual(evo: EvolutionOperator) -> float:
    u = evo.matrix
    return float(np.abs(u.conj().T @ u - np.eye(u.shape[0])).max())


def diagonalize_floquet(evo: EvolutionOperator, unitarity_tol: float = 1e-8) -> FloquetSpectrum:
    """Eigenphases and orthonormal eigenvectors of U via complex Schur form.

    The Schur transform of a normal matrix is diagonal up to rounding, which
    keeps eigenvectors orthonormal inside the (possibly large) degenerate
    zero-mode cluster.
    """
    u = evo.matrix
    t, z = scipy.linalg.schur(u.astype(complex), output="complex")
    eigvals = np.diag(t)
    if np.abs(np.abs(eigvals) - 1.0).max() > unitarity_tol:
        raise EigensolverError(
            "input is not unitary within tolerance: max | |eig| - 1 | = "
            f"{np.abs(np.abs(eigvals) - 1.0).max():.3e}"
        )
    theta = -np.angle(eigvals)  # eigenvalue e^{-i theta}
    theta = np.where(theta <= -np.pi + 1e-15, theta + 2 * np.pi, theta)
    period = evo.protocol.period
    quasi = theta / period
    order = np.argsort(quasi, kind="stable")
    return FloquetSpectrum(
        quasienergies=quasi[order],
        eigenvectors=z[:, order],
        omega=evo.protocol.omega,
        basis_tag=evo.basis_tag,
    )


def floquet_hamiltonian_exact(spectrum: FloquetSpectrum) -> np.ndarray:
    """Principal-branch Floquet Hamiltonian H_F = sum_n E_F^n |n><n|."""
    if spectrum.branch_edge_flag():
        warnings.warn(
            "eigenphases near the branch cut: the principal logarithm is "
            "ambiguous at these parameters",
            RuntimeWarning,
            stacklevel=2,
        )
    v = spectrum.eigenvectors
    hf = (v * spectrum.quasienergies) @ v.conj().T
    return 0.5 * (hf + hf.conj().T)


def evolve_stroboscopic(psi0: np.ndarray, evo: EvolutionOperator, n_max: int) -> np.ndarray:
    """State after 0..n_max drive cycles via repeated application of U.

    Returns an (n_max + 1, dim) array; aborts if the norm drifts by > 1e-6.
    """
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (evo.dim,):
        raise ValueError(f"state dimension {psi0.shape} does not match U ({evo.dim})")
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-9:
        raise ValueError("initial state must be normalized")
    out = np.empty((n_max + 1, evo.dim), dtype=complex)
    out[0] = psi0
    psi = psi0
    for n in range(1, n_max + 1):
        psi = evo.matrix @ psi
        drift = abs(np.linalg.norm(psi) - 1.0)
        if drift > 1e-6:
            raise RuntimeError(f"norm drift {drift:.3e} at cycle {n}")
        out[n] = psi
    return out
