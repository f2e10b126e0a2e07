"""Stroboscopic series, Fourier analysis, entanglement and scar identification."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse

from .basis import ChainGeometry, ConstrainedBasis, SectorBasis, enumerate_basis, fibonacci
from .floquet import EvolutionOperator, FloquetSpectrum, evolve_stroboscopic

ZERO_MODE_TOL = 1e-8  # relative to the drive frequency
ENTROPY_CLAMP = 1e-14


@dataclass(frozen=True)
class ObservableSeries:
    """Real stroboscopic time series indexed by cycle number."""

    values: np.ndarray
    observable: str
    initial_state: str = ""

    @property
    def n_max(self) -> int:
        return len(self.values) - 1


@dataclass(frozen=True)
class FourierResult:
    """Mean-subtracted power spectrum of a stroboscopic series."""

    omega: np.ndarray
    power: np.ndarray
    omega_res: float | None
    at_floor: bool
    bin_width: float


@dataclass(frozen=True)
class ScarSet:
    """Scar eigenstates identified by initial-state overlap."""

    members: np.ndarray
    w_r: float | None
    threshold: float
    overlaps: np.ndarray = field(repr=False)

    @property
    def count(self) -> int:
        return len(self.members)


def initial_state(basis: ConstrainedBasis, name: str) -> np.ndarray:
    """Named product / cat states in the full constrained basis.

    'Z2' puts up-spins on odd sites (site 1 up), 'Z2bar' on even sites,
    'Z2plus' is their symmetric combination, 'vacuum' is all-down.  Any other
    name is parsed as a site-1-first bitstring of 0/1.
    """
    L = basis.geometry.L
    psi = np.zeros(basis.dim)
    if name == "Z2":
        mask = sum(1 << i for i in range(0, L, 2))
        psi[basis.index_of(mask)] = 1.0
    elif name == "Z2bar":
        mask = sum(1 << i for i in range(1, L, 2))
        psi[basis.index_of(mask)] = 1.0
    elif name == "Z2plus":
        a = sum(1 << i for i in range(0, L, 2))
        b = sum(1 << i for i in range(1, L, 2))
        psi[basis.index_of(a)] = 1.0 / math.sqrt(2)
        psi[basis.index_of(b)] = 1.0 / math.sqrt(2)
    elif name == "vacuum":
        psi[basis.index_of(0)] = 1.0
    elif set(name) <= {"0", "1"} and len(name) == L:
        mask = sum(1 << i for i, c in enumerate(name) if c == "1")
        if mask not in basis:
            raise ValueError(f"bitstring {name} violates the blockade constraint")
        psi[basis.index_of(mask)] = 1.0
    else:
        raise ValueError(f"unknown initial state {name!r}")
    return psi


def correlator_series(psi0, evo: EvolutionOperator, correlator, n_max: int,
                      tag: str = "O22") -> ObservableSeries:
    """<psi_n| O |psi_n> for n = 0..n_max; aborts on imaginary residue."""
    states = evolve_stroboscopic(psi0, evo, n_max)
    vals = np.einsum("ni,ni->n", states.conj(), states @ np.asarray(
        correlator.T.toarray() if hasattr(correlator, "toarray") else correlator.T
    ))
    if np.abs(vals.imag).max() > 1e-8:
        raise RuntimeError(f"correlator imaginary residue {np.abs(vals.imag).max():.2e}")
    return ObservableSeries(values=vals.real, observable=tag)


def fidelity_series(psi0, evo: EvolutionOperator, n_max: int) -> ObservableSeries:
    """|<psi_n|psi_0>|^2 for n = 0..n_max."""
    states = evolve_stroboscopic(psi0, evo, n_max)
    vals = np.abs(states @ np.asarray(psi0).conj()) ** 2
    return ObservableSeries(values=vals, observable="fidelity")


def fourier_peak(series: ObservableSeries, period: float) -> FourierResult:
    """Largest non-DC peak of the mean-subtracted power spectrum.

    The series is sampled at interval T; frequencies are reported in the same
    energy units, resolvable on (0, omega_D/2].
    """
    vals = np.asarray(series.values, dtype=float)
    n = len(vals)
    if n < 64:
        raise ValueError("need at least 64 samples for a meaningful spectrum")
    demeaned = vals - vals.mean()
    power = np.abs(np.fft.rfft(demeaned)) ** 2
    omega = 2.0 * np.pi * np.fft.rfftfreq(n, d=period)
    bin_width = omega[1]
    nondc = power[1:]
    if nondc.max() <= 1e-24 * max(1.0, (vals ** 2).max()) or nondc.max() == 0.0:
        return FourierResult(omega=omega, power=power, omega_res=None,
                             at_floor=True, bin_width=bin_width)
    k = 1 + int(np.argmax(nondc))
    at_floor = k == 1
    return FourierResult(omega=omega, power=power, omega_res=float(omega[k]),
                         at_floor=at_floor, bin_width=bin_width)


def half_chain_entropy(psi_full: np.ndarray, geometry: ChainGeometry,
                       basis: ConstrainedBasis | None = None) -> float:
    """Half-chain von Neumann entropy (nats) with the constrained bipartition.

    The amplitudes are arranged on the open-chain product space A x B (both of
    dimension F_{L/2+2}); amplitudes of junction-violating configurations are
    identically zero because the periodic basis excludes them.
    """
    if geometry.L % 2 != 0:
        raise ValueError("half-chain entropy requires even L")
    if not geometry.periodic:
        raise ValueError("entropy bipartition is defined for the periodic chain")
    if basis is None:
        basis = enumerate_basis(geometry)
    psi_full = np.asarray(psi_full)
    if psi_full.shape != (basis.dim,):
        raise ValueError(
            f"state has dimension {psi_full.shape}, expected the full basis "
            f"({basis.dim}); embed sector vectors first"
        )
    half = geometry.L // 2
    sub = enumerate_basis(ChainGeometry(half, "open"))
    m = np.zeros((sub.dim, sub.dim), dtype=complex)
    lo_mask = (1 << half) - 1
    for idx, s in enumerate(basis.states):
        s = int(s)
        a = s & lo_mask
        b = s >> half
        m[sub.index_of(a), sub.index_of(b)] = psi_full[idx]
    svals = scipy.linalg.svd(m, compute_uv=False)
    p = svals ** 2
    p = p[p > ENTROPY_CLAMP]
    s_ent = float(-np.sum(p * np.log(p)))
    bound = math.log(fibonacci(half + 2))
    if not (-1e-9 <= s_ent <= bound + 1e-9):
        raise AssertionError(f"entropy {s_ent} outside [0, ln F_{half + 2}]")
    return max(s_ent, 0.0)


def eigenstate_entanglement(spectrum: FloquetSpectrum, sector: SectorBasis | None,
                            basis: ConstrainedBasis) -> np.ndarray:
    """S_{L/2} for every Floquet eigenstate (sector vectors are embedded)."""
    out = np.empty(spectrum.dim)
    for i in range(spectrum.dim):
        v = spectrum.eigenvectors[:, i]
        if sector is not None:
            v = sector.embed_vector(v)
        out[i] = half_chain_entropy(v, basis.geometry, basis)
    return out


def state_overlaps(spectrum: FloquetSpectrum, psi0: np.ndarray) -> np.ndarray:
    """|<psi0|Phi_n>|^2 for every Floquet eigenstate."""
    return np.abs(spectrum.eigenvectors.conj().T @ np.asarray(psi0, dtype=complex)) ** 2


def zero_mode_mask(spectrum: FloquetSpectrum, tol: float = ZERO_MODE_TOL) -> np.ndarray:
    return np.abs(spectrum.quasienergies) < tol * spectrum.omega


def identify_scars(spectrum: FloquetSpectrum, psi0: np.ndarray,
                   threshold: float = 1e-2) -> ScarSet:
    """Eigenstates with initial-state overlap^2 above threshold.

    Zero-quasienergy states are excluded first (the dense zero-mode band would
    otherwise contaminate the gap estimate).  w_R is the median gap between
    tower levels; hybridization can split one tower level into a narrow
    multiplet, so members closer than half the largest member gap are merged
    and each multiplet is represented by its highest-overlap state.  An empty
    set is the thermal-regime signature.
    """
    overlaps = state_overlaps(spectrum, psi0)
    usable = ~zero_mode_mask(spectrum)
    members = np.where(usable & (overlaps > threshold))[0]
    w_r = _tower_gap(spectrum.quasienergies, overlaps, members)
    return ScarSet(members=members, w_r=w_r, threshold=threshold, overlaps=overlaps)


def _tower_gap(energies, overlaps, members):
    """Median gap between scar tower levels (None when fewer than two).

    Members separated by less than half the largest member gap count as one
    hybridized level, located at its highest-overlap state.
    """
    if len(members) < 2:
        return None
    order = members[np.argsort(energies[members])]
    e, o = energies[order], overlaps[order]
    gaps = np.diff(e)
    breaks = np.where(gaps > 0.5 * gaps.max())[0]
    reps = []
    start = 0
    for stop in list(breaks + 1) + [len(e)]:
        reps.append(e[start + np.argmax(o[start:stop])])
        start = stop
    if len(reps) < 2:
        return None
    return float(np.median(np.diff(reps)))


def scar_gap_from_hamiltonian(ham: np.ndarray, psi0: np.ndarray,
                              threshold: float = 1e-2,
                              zero_tol: float = 1e-10) -> float | None:
    """Scar-tower energy gap of a static Hamiltonian by the same criterion.

    Used with the undriven PXP model to measure the asymptotic gap that the
    driven prediction is compared against.
    """
    if scipy.sparse.issparse(ham):
        ham = ham.toarray()
    eps, vec = scipy.linalg.eigh(ham)
    overlaps = np.abs(vec.conj().T @ np.asarray(psi0, dtype=complex)) ** 2
    scale = max(np.abs(eps).max(), 1.0)
    usable = np.abs(eps) > zero_tol * scale
    members = np.where(usable & (overlaps > threshold))[0]
    return _tower_gap(eps, overlaps, members)
