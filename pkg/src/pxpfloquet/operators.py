"""Hamiltonians and observables in the constrained basis or a symmetry sector.

Full-basis builders return scipy sparse CSR matrices; passing a SectorBasis
instead projects to the dense sector block.  hbar = 1 throughout; with the
default w = sqrt(2) all energies are in units of w / sqrt(2), so parameter
values like lambda = 15, omega_D = 7.5 can be used verbatim.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse

from .basis import ConstrainedBasis, SectorBasis, flippable_sites

DEFAULT_W = math.sqrt(2.0)


@dataclass(frozen=True)
class DriveProtocol:
    """Square-pulse drive: lambda(t) = -lambda for t <= T/2, +lambda after."""

    w: float = DEFAULT_W
    lam: float = 15.0
    omega: float = 15.0

    def __post_init__(self):
        if not (self.omega > 0):
            raise ValueError("drive frequency must be positive")
        if not (np.isfinite(self.w) and np.isfinite(self.lam)):
            raise ValueError("couplings must be finite")

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    @property
    def gamma(self) -> float:
        """Dimensionless drive strength lambda T / 4."""
        return self.lam * self.period / 4.0

    @property
    def delta(self) -> float:
        """Dimensionless transverse coupling w T / 4."""
        return self.w * self.period / 4.0


# single-site actions on a classical bit (up = 1): bit -> (new bit, amplitude)
def _act(code: str, bit: int):
    if code == "x":
        return 1 - bit, 1.0
    if code == "y":
        return (0, 1j) if bit else (1, -1j)
    if code == "z":
        return bit, (1.0 if bit else -1.0)
    if code == "p":  # projector onto down
        return bit, (0.0 if bit else 1.0)
    if code == "n":  # projector onto up
        return bit, (1.0 if bit else 0.0)
    raise ValueError(f"unknown site operator {code!r}")


def apply_site_ops(state: int, ops, L: int):
    """Apply a product of single-site operators to a bitmask ket.

    ops is a sequence of (site, code) pairs; the rightmost entry acts first.
    Returns (state, amplitude); the amplitude is complex and may be zero.
    """
    amp = 1.0 + 0.0j
    for site, code in reversed(ops):
        bit = (state >> site) & 1
        new_bit, a = _act(code, bit)
        amp *= a
        if amp == 0:
            return state, 0.0j
        if new_bit != bit:
            state ^= 1 << site
    return state, amp


def tilde(code: str, site: int, L: int):
    """Projected operator sigma-tilde^alpha_j = P_{j-1} sigma^alpha_j P_{j+1}."""
    return [((site - 1) % L, "p"), (site, code), ((site + 1) % L, "p")]


def build_term_matrix(basis: ConstrainedBasis, terms, dtype=complex):
    """Assemble sum_k coeff_k * (operator string)_k over the constrained basis.

    terms: iterable of (coeff, ops) with ops as in apply_site_ops.  Raises if
    any term maps a constrained state outside the constrained space.
    """
    L = basis.geometry.L
    rows, cols, data = [], [], []
    for coeff, ops in terms:
        if coeff == 0:
            continue
        for n, s in enumerate(basis.states):
            out, amp = apply_site_ops(int(s), ops, L)
            if amp == 0:
                continue
            if out not in basis:
                raise ValueError(
                    "operator string leaves the constrained space: "
                    f"{ops} on state {int(s):0{L}b}"
                )
            rows.append(basis.index_of(out))
            cols.append(n)
            data.append(coeff * amp)
    mat = scipy.sparse.csr_matrix(
        (data, (rows, cols)), shape=(basis.dim, basis.dim), dtype=complex
    )
    if dtype is float:
        imag_max = np.abs(mat.imag.tocoo().data).max() if mat.nnz else 0.0
        if imag_max > 1e-14:
            raise ValueError("requested a real matrix but found imaginary parts")
        mat = mat.real
    return mat


def _dispatch(basis_or_sector):
    if isinstance(basis_or_sector, SectorBasis):
        return basis_or_sector.basis, basis_or_sector
    return basis_or_sector, None


def build_h_spin(basis_or_sector, w: float, lam_signed: float):
    """Spin Hamiltonian sum_i (-w sigma-tilde^x_i + (lam/2) sigma^z_i).

    Off-diagonal elements are -w exactly on constraint-allowed spin flips;
    the diagonal is (lam/2) (n_up - n_down).
    """
    basis, sector = _dispatch(basis_or_sector)
    geometry = basis.geometry
    L = geometry.L
    rows, cols, data = [], [], []
    for n, s in enumerate(basis.states):
        s = int(s)
        n_up = s.bit_count()
        diag = 0.5 * lam_signed * (2 * n_up - L)
        if diag != 0.0:
            rows.append(n)
            cols.append(n)
            data.append(diag)
        for i in flippable_sites(s, geometry):
            m = basis.index_of(s ^ (1 << i))
            rows.append(m)
            cols.append(n)
            data.append(-w)
    mat = scipy.sparse.csr_matrix(
        (data, (rows, cols)), shape=(basis.dim, basis.dim), dtype=np.float64
    )
    if sector is not None:
        return sector.project_operator(mat)
    return mat


def build_correlator(basis_or_sector, site: int = 2, separation: int = 2,
                     site_averaged: bool = False):
    """Density-density correlator O_ij = n_i n_{i+j} (1-based sites).

    Diagonal matrix with entry 1 iff both measured sites are up.  With
    site_averaged=True the correlator is averaged over all i (translation
    average); the default is site-resolved at i = 2, j = 2.
    """
    basis, sector = _dispatch(basis_or_sector)
    L = basis.geometry.L
    if not (1 <= site <= L):
        raise ValueError(f"site {site} outside 1..{L}")
    if not (1 <= separation < L):
        raise ValueError(f"separation {separation} outside 1..{L - 1}")
    sites = range(L) if site_averaged else [site - 1]
    diag = np.zeros(basis.dim)
    for n, s in enumerate(basis.states):
        s = int(s)
        acc = 0.0
        for i0 in sites:
            j0 = (i0 + separation) % L
            if (s >> i0) & 1 and (s >> j0) & 1:
                acc += 1.0
        diag[n] = acc / len(list(sites)) if site_averaged else acc
    mat = scipy.sparse.diags(diag, format="csr")
    if sector is not None:
        return sector.project_operator(mat)
    return mat


def build_observable(basis_or_sector, kind: str):
    """Common global observables.

    kind: 'sum_sigma_x_tilde', 'sum_sigma_y_tilde', 'sum_sigma_z', 'n_total'.
    """
    basis, sector = _dispatch(basis_or_sector)
    geometry = basis.geometry
    L = geometry.L
    if kind in ("sum_sigma_x_tilde", "sum_sigma_y_tilde"):
        code = "x" if kind.endswith("x_tilde") else "y"
        rows, cols, data = [], [], []
        for n, s in enumerate(basis.states):
            s = int(s)
            for i in flippable_sites(s, geometry):
                bit = (s >> i) & 1
                m = basis.index_of(s ^ (1 << i))
                rows.append(m)
                cols.append(n)
                if code == "x":
                    data.append(1.0)
                else:
                    data.append(1j if bit else -1j)
        mat = scipy.sparse.csr_matrix(
            (data, (rows, cols)), shape=(basis.dim, basis.dim),
            dtype=np.float64 if code == "x" else np.complex128,
        )
    elif kind == "sum_sigma_z":
        diag = np.array([2 * int(s).bit_count() - L for s in basis.states], dtype=float)
        mat = scipy.sparse.diags(diag, format="csr")
    elif kind == "n_total":
        diag = np.array([int(s).bit_count() for s in basis.states], dtype=float)
        mat = scipy.sparse.diags(diag, format="csr")
    else:
        raise ValueError(f"unknown observable kind {kind!r}")
    if sector is not None:
        return sector.project_operator(mat)
    return mat


def q_operator(basis_or_sector):
    """Diagonal Q = prod_j sigma^z_j (chiral grading of the Floquet spectrum)."""
    basis, sector = _dispatch(basis_or_sector)
    L = basis.geometry.L
    diag = np.array(
        [1.0 if (L - int(s).bit_count()) % 2 == 0 else -1.0 for s in basis.states]
    )
    mat = scipy.sparse.diags(diag, format="csr")
    if sector is not None:
        return sector.project_operator(mat)
    return mat


def hermiticity_residual(mat) -> float:
    """Max-norm deviation from Hermiticity."""
    if scipy.sparse.issparse(mat):
        d = (mat - mat.conj().T).tocoo()
        return float(np.abs(d.data).max()) if d.nnz else 0.0
    return float(np.abs(mat - mat.conj().T).max())


def operator_to_coo_rows(mat):
    """(row, col, re, im) tuples for CSV export of an operator."""
    coo = scipy.sparse.coo_matrix(mat)
    return [
        (int(r), int(c), float(np.real(v)), float(np.imag(v)))
        for r, c, v in zip(coo.row, coo.col, coo.data)
    ]
