"""Analytic and semi-analytic Floquet Hamiltonians.

Magnus expansion through third order (assembled from the exact BCH
commutators of the two half-period generators), the resummed large-amplitude
series for the projected-flip channels, the closed-form O(w) Floquet
Hamiltonian valid at any drive frequency, and the f1/f2 norm decomposition.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.sparse

from .basis import ConstrainedBasis, SectorBasis, count_pxp_pairs
from .operators import DriveProtocol, build_observable

# gamma-series coefficients of the two projected-flip channels through
# gamma^10: amplitude_x = -w * gamma-series, amplitude_y = -w * gamma * series.
X_CHANNEL_COEFFS = (
    Fraction(1),
    Fraction(-2, 3),
    Fraction(2, 15),
    Fraction(-4, 315),
    Fraction(2, 2835),
    Fraction(-4, 155925),
)
Y_CHANNEL_COEFFS = (
    Fraction(1),
    Fraction(-1, 3),
    Fraction(2, 45),
    Fraction(-1, 315),
    Fraction(2, 14175),
    Fraction(-2, 467775),
)


def x_channel_taylor(k: int) -> Fraction:
    """Taylor coefficient of sin(g)cos(g)/g = sin(2g)/(2g) at g^(2k)."""
    return Fraction((-1) ** k * 4 ** k, math.factorial(2 * k + 1))


def y_channel_taylor(k: int) -> Fraction:
    """Taylor coefficient of sin^2(g)/g^2 at g^(2k)."""
    return Fraction((-1) ** k * 2 * 4 ** k, math.factorial(2 * k + 2))


def sinc(g: float) -> float:
    """sin(g)/g with the analytic value 1 at g = 0."""
    return float(np.sinc(g / np.pi))


def resummed_x_amplitude(w: float, gamma: float, n_terms: int | None = None) -> float:
    """Flip-channel x amplitude: series if truncated, else -w sin(g)cos(g)/g."""
    if n_terms is None:
        return -w * sinc(gamma) * math.cos(gamma)
    acc = sum(float(X_CHANNEL_COEFFS[k]) * gamma ** (2 * k) for k in range(n_terms))
    return -w * acc


def resummed_y_amplitude(w: float, gamma: float, n_terms: int | None = None) -> float:
    """Flip-channel y amplitude: series if truncated, else -w sin^2(g)/g."""
    if n_terms is None:
        return -w * sinc(gamma) * math.sin(gamma)
    acc = sum(float(Y_CHANNEL_COEFFS[k]) * gamma ** (2 * k) for k in range(n_terms))
    return -w * gamma * acc


@dataclass(frozen=True)
class MagnusTerms:
    """Per-order Magnus pieces and their PXP / non-PXP regrouping.

    pieces[k] is the O(1/omega^k) contribution; h0 collects the renormalized
    projected-flip terms with coefficients C1 = 1 - 2 g^2/3 and
    C2 = g [1 - (g^2 - 4 d^2)/3]; h1 = sum(pieces) - h0 holds the remaining
    third-order terms, so the regrouping is exact by construction.
    """

    pieces: tuple
    h0: np.ndarray
    h1: np.ndarray
    c1: float
    c2: float

    @property
    def total(self) -> np.ndarray:
        return sum(self.pieces)


def _comm(a, b):
    return a @ b - b @ a


def magnus_terms(basis_or_sector, protocol: DriveProtocol, order: int = 3) -> MagnusTerms:
    """Magnus expansion of the square-pulse Floquet Hamiltonian through 1/omega^3.

    The BCH series for ln(e^{X+} e^{X-}) is evaluated with exact matrix
    commutators of X+- = -i (T/2) H(+-lambda), so no transcribed operator
    strings enter; only the C1/C2 regrouping of the flip channels is analytic.
    """
    if not 0 <= order <= 3:
        raise ValueError("supported Magnus orders are 0..3")
    t_period = protocol.period
    w, gamma, delta = protocol.w, protocol.gamma, protocol.delta

    def dense(kind):
        mat = build_observable(basis_or_sector, kind)
        return mat.toarray() if scipy.sparse.issparse(mat) else np.asarray(mat)

    sx = dense("sum_sigma_x_tilde").astype(complex)
    sy = dense("sum_sigma_y_tilde").astype(complex)
    sz = dense("sum_sigma_z").astype(complex)

    x1 = 2j * delta * sx
    x2 = -1j * gamma * sz
    xp, xm = x1 + x2, x1 - x2

    pieces = [(1j / t_period) * (xp + xm)]
    if order >= 1:
        c = _comm(xp, xm)
        pieces.append((1j / t_period) * 0.5 * c)
    if order >= 2:
        pieces.append((1j / t_period) * _comm(xp - xm, c) / 12.0)
    if order >= 3:
        pieces.append((1j / t_period) * (-_comm(xm, _comm(xp, c)) / 24.0))
    pieces = tuple(0.5 * (p + p.conj().T) for p in pieces)

    if order >= 3:
        c1 = 1.0 - 2.0 * gamma ** 2 / 3.0
        c2 = gamma * (1.0 - (gamma ** 2 - 4.0 * delta ** 2) / 3.0)
    elif order == 2:
        c1 = 1.0 - 2.0 * gamma ** 2 / 3.0
        c2 = gamma
    elif order == 1:
        c1, c2 = 1.0, gamma
    else:
        c1, c2 = 1.0, 0.0
    h0 = -w * (c1 * sx + c2 * sy)
    h1 = sum(pieces) - h0
    return MagnusTerms(pieces=pieces, h0=h0, h1=h1, c1=c1, c2=c2)


def fpt_closed_form(basis_or_sector, protocol: DriveProtocol) -> np.ndarray:
    """Closed-form O(w) Floquet Hamiltonian, valid for arbitrary drive frequency.

    H_F = -w (sin g / g) sum_j [cos g sigma-tilde^x_j + sin g sigma-tilde^y_j];
    every connected matrix element has modulus w |sin g| / g and phase -g.
    Vanishes identically when lambda / omega is an even integer (g = q pi).
    """
    gamma = protocol.gamma

    def dense(kind):
        mat = build_observable(basis_or_sector, kind)
        return mat.toarray() if scipy.sparse.issparse(mat) else np.asarray(mat)

    amp = protocol.w * sinc(gamma)
    hf = -amp * (math.cos(gamma) * dense("sum_sigma_x_tilde").astype(complex)
                 + math.sin(gamma) * dense("sum_sigma_y_tilde"))
    return hf


@dataclass(frozen=True)
class NormSplit:
    """Mean squared H_F matrix elements over flip-connected pairs and the rest.

    Both f1 and f2 are normalized by the same N0 (the number of connected
    pairs); diagonal elements count toward f2.
    """

    f1: float
    f2: float
    n0: int
    machinery: str


def norm_split(h_f: np.ndarray, basis: ConstrainedBasis,
               machinery: str = "exact") -> NormSplit:
    """Split the squared Frobenius weight of H_F by the flip-connected pattern.

    h_f must be given in the full constrained sigma^z basis (not a symmetry
    sector); the connected set is the sparsity pattern of sum_l sigma-tilde^x_l.
    """
    if not isinstance(basis, ConstrainedBasis):
        raise TypeError("norm_split requires the full constrained basis")
    h_f = np.asarray(h_f)
    if h_f.shape != (basis.dim, basis.dim):
        raise ValueError("H_F must be square over the full constrained basis")
    pattern = build_observable(basis, "sum_sigma_x_tilde")
    mask = np.abs(pattern.toarray()) > 0.5
    n0 = int(mask.sum())
    if n0 != count_pxp_pairs(basis.geometry):
        raise AssertionError("flip-pattern count disagrees with pair counting")
    sq = np.abs(h_f) ** 2
    total = float(sq.sum())
    f1 = float(sq[mask].sum()) / n0
    f2 = (total - float(sq[mask].sum())) / n0
    return NormSplit(f1=f1, f2=f2, n0=n0, machinery=machinery)


def critical_frequencies(lam: float, q_max: int) -> list[float]:
    """Predicted fastest-thermalization frequencies omega_c = lambda / (2q)."""
    if lam <= 0:
        raise ValueError("drive amplitude must be positive")
    if q_max < 1:
        raise ValueError("q_max must be at least 1")
    return [lam / (2.0 * q) for q in range(1, q_max + 1)]


def scar_gap_prediction(protocol: DriveProtocol, w_infinity: float) -> float:
    """Driven scar quasienergy separation w_R = w_inf sin(g)/g."""
    return w_infinity * sinc(protocol.gamma)
