"""Level statistics, zero-mode census and the ergodicity phase diagram."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import (ChainGeometry, SymmetrySector, build_sector_basis,
                    enumerate_basis, fibonacci)
from .effective import critical_frequencies
from .floquet import (FloquetSpectrum, build_floquet_operator,
                      diagonalize_floquet)
from .observables import (correlator_series, fourier_peak, identify_scars,
                          initial_state, zero_mode_mask)
from .operators import DriveProtocol, build_correlator

MIN_LEVELS = 50
DEGENERACY_TOL = 1e-12


def goe_reference(r: np.ndarray) -> np.ndarray:
    """GOE surmise P(r) = (27/4)(r + r^2)/(1 + r + r^2)^(5/2)."""
    r = np.asarray(r, dtype=float)
    return 6.75 * (r + r ** 2) / (1.0 + r + r ** 2) ** 2.5


def poisson_reference(r: np.ndarray) -> np.ndarray:
    """Poisson P(r) = 2/(1 + r)^2."""
    r = np.asarray(r, dtype=float)
    return 2.0 / (1.0 + r) ** 2


GOE_MEAN_R = 0.535
POISSON_MEAN_R = 0.386


@dataclass(frozen=True)
class LevelStatistics:
    """Consecutive-gap ratios r_n of a single-sector spectrum."""

    r_values: np.ndarray
    mean_r: float
    bins: np.ndarray
    densities: np.ndarray
    low_confidence: bool


def level_statistics_from_energies(energies: np.ndarray, n_bins: int = 20) -> LevelStatistics:
    """r_n = min(d_n, d_{n-1}) / max(d_n, d_{n-1}) from sorted level gaps.

    Exact degeneracies (gap < 1e-12 of the spectral span) are dropped before
    forming ratios.  Fewer than 50 usable levels flags low confidence.
    """
    e = np.sort(np.asarray(energies, dtype=float))
    span = max(e[-1] - e[0], 1.0) if len(e) > 1 else 1.0
    gaps = np.diff(e)
    gaps = gaps[gaps > DEGENERACY_TOL * span]
    if len(gaps) < 2:
        raise ValueError("not enough non-degenerate gaps for level statistics")
    r = np.minimum(gaps[1:], gaps[:-1]) / np.maximum(gaps[1:], gaps[:-1])
    hist, edges = np.histogram(r, bins=n_bins, range=(0.0, 1.0), density=True)
    return LevelStatistics(
        r_values=r,
        mean_r=float(r.mean()),
        bins=edges,
        densities=hist,
        low_confidence=len(e) < MIN_LEVELS,
    )


def level_statistics(spectrum: FloquetSpectrum, n_bins: int = 20) -> LevelStatistics:
    """Level statistics of a sector quasienergy spectrum, zero modes excluded."""
    keep = ~zero_mode_mask(spectrum)
    return level_statistics_from_energies(spectrum.quasienergies[keep], n_bins=n_bins)


def zero_mode_census(spectrum: FloquetSpectrum, geometry: ChainGeometry):
    """Count of zero-quasienergy states and the chiral lower bound F_{L/2}.

    Defined on the full-basis (or combined-sector) spectrum of an even chain;
    asserts count >= bound.
    """
    if geometry.L % 2 != 0:
        raise ValueError("the zero-mode bound is defined for even L")
    count = int(zero_mode_mask(spectrum).sum())
    bound = fibonacci(geometry.L // 2)
    if count < bound:
        raise AssertionError(
            f"zero-mode count {count} below the chiral bound {bound}"
        )
    return count, bound


def pairing_residual(spectrum: FloquetSpectrum) -> float:
    """Worst-case distance of each nonzero quasienergy from a -E partner."""
    e = spectrum.quasienergies[~zero_mode_mask(spectrum)]
    if len(e) == 0:
        return 0.0
    omega = spectrum.omega
    # the partner of E is -E up to a branch shift of +-omega
    worst = 0.0
    for shift in (0.0, omega, -omega):
        cand = np.abs(e[:, None] - (-e[None, :] + shift))
        best = cand.min(axis=1)
        worst = best if shift == 0.0 else np.minimum(worst, best)
    return float(worst.max())


@dataclass(frozen=True)
class PhaseThresholds:
    """Classification thresholds; recorded verbatim in every output."""

    n_max: int = 600
    late_fraction: float = 0.4
    std_tol: float = 0.02
    mean_tol: float = 0.05
    peak_factor: float = 10.0
    overlap_threshold: float = 1e-2
    # a scar tower needs several members; a single +-E pair (e.g. nearly
    # frozen dynamics close to gamma = q*pi) does not count as scarring
    min_tower_states: int = 4
    # overlap floor in units of 1/dim, so small sectors where a thermal
    # state already has overlap^2 ~ 1/dim do not flag spurious scars
    min_tower_weight: float = 5.0


@dataclass(frozen=True)
class PhasePoint:
    """Classification of one (omega_D, lambda) grid point."""

    omega: float
    lam: float
    L: int
    classification: str
    mean_late: float
    std_late: float
    inf_t_value: float
    scar_count: int
    scar_gap: float | None
    peak_prominence: float
    branch_warning: bool
    error: str = ""


def classify_phase_point(omega: float, lam: float, L: int,
                         state_name: str = "Z2plus",
                         w: float | None = None,
                         thresholds: PhaseThresholds = PhaseThresholds(),
                         context: dict | None = None) -> PhasePoint:
    """Classify one drive point as ergodic, nonergodic or precursor.

    Ergodic: late-time correlator locked to the infinite-temperature value
    with no scar tower; nonergodic: a scar tower plus a Fourier peak well
    above the noise floor; anything inconclusive is a precursor.  Dynamics run
    in the K=0, P=+1 sector.
    """
    if thresholds.n_max < 500:
        raise ValueError("classification requires at least 500 drive cycles")
    protocol = DriveProtocol(w=w, lam=lam, omega=omega) if w is not None else \
        DriveProtocol(lam=lam, omega=omega)
    if context is None:
        context = {}
    key = L
    if key not in context:
        basis = enumerate_basis(ChainGeometry(L))
        sector = build_sector_basis(basis, SymmetrySector(0, +1))
        context[key] = (basis, sector,
                        build_correlator(sector),
                        build_correlator(basis))
    basis, sector, o22_sector, _ = context[key]

    psi_full = initial_state(basis, state_name)
    psi = sector.project_vector(psi_full)
    nrm = np.linalg.norm(psi)
    if abs(nrm - 1.0) > 1e-9:
        raise ValueError(f"state {state_name} is not supported in the K=0,P=+1 sector")
    psi = psi / nrm

    evo = build_floquet_operator(sector, protocol)
    spectrum = diagonalize_floquet(evo)
    threshold = max(thresholds.overlap_threshold,
                    thresholds.min_tower_weight / sector.dim)
    scars = identify_scars(spectrum, psi, threshold=threshold)
    tower = scars.count >= thresholds.min_tower_states and scars.w_r is not None

    series = correlator_series(psi, evo, o22_sector, thresholds.n_max)
    inf_t = float(np.trace(o22_sector).real) / sector.dim
    late = series.values[int((1.0 - thresholds.late_fraction) * len(series.values)):]
    mean_late = float(late.mean())
    std_late = float(late.std())

    four = fourier_peak(series, protocol.period)
    nondc = four.power[1:]
    floor = float(np.median(nondc)) if len(nondc) else 0.0
    prominence = float(nondc.max() / floor) if floor > 0 else np.inf

    ergodic = (std_late < thresholds.std_tol
               and abs(mean_late - inf_t) < thresholds.mean_tol
               and not tower)
    nonergodic = (tower
                  and four.omega_res is not None
                  and prominence > thresholds.peak_factor)
    if ergodic:
        label = "ergodic"
    elif nonergodic:
        label = "nonergodic"
    else:
        label = "precursor"
    return PhasePoint(
        omega=omega, lam=lam, L=L, classification=label,
        mean_late=mean_late, std_late=std_late, inf_t_value=inf_t,
        scar_count=scars.count, scar_gap=scars.w_r,
        peak_prominence=prominence,
        branch_warning=spectrum.branch_edge_flag(),
    )


def phase_diagram_sweep(omegas, lams, L: int, state_name: str = "Z2plus",
                        thresholds: PhaseThresholds = PhaseThresholds(),
                        q_max: int = 6):
    """Classify every grid point; per-point failures are recorded, not raised.

    Returns (points, overlays) where overlays maps each lambda to its
    predicted critical frequencies lambda/(2q).
    """
    context: dict = {}
    points = []
    for lam in lams:
        for omega in omegas:
            try:
                points.append(classify_phase_point(
                    omega, lam, L, state_name=state_name,
                    thresholds=thresholds, context=context))
            except Exception as exc:  # sweep must survive bad points
                points.append(PhasePoint(
                    omega=omega, lam=lam, L=L, classification="failed",
                    mean_late=np.nan, std_late=np.nan, inf_t_value=np.nan,
                    scar_count=0, scar_gap=None, peak_prominence=np.nan,
                    branch_warning=False, error=str(exc)))
    overlays = {lam: critical_frequencies(lam, q_max) for lam in lams}
    return points, overlays
