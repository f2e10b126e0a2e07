"""Exact diagonalization and Floquet analysis of the driven constrained spin chain."""

__version__ = "0.1.0"

from .basis import (ChainGeometry, ConstrainedBasis, SectorBasis,
                    SymmetrySector, build_sector_basis, count_pxp_pairs,
                    enumerate_basis, fibonacci)
from .operators import (DriveProtocol, build_correlator, build_h_spin,
                        build_observable)
from .floquet import (EvolutionOperator, FloquetSpectrum,
                      build_floquet_operator, diagonalize_floquet,
                      evolve_stroboscopic, floquet_hamiltonian_exact)
from .observables import (ObservableSeries, ScarSet, correlator_series,
                          fidelity_series, fourier_peak, half_chain_entropy,
                          identify_scars, initial_state)
from .effective import (MagnusTerms, NormSplit, critical_frequencies,
                        fpt_closed_form, magnus_terms, norm_split,
                        scar_gap_prediction)
from .diagnostics import (LevelStatistics, PhasePoint, PhaseThresholds,
                          classify_phase_point, level_statistics,
                          phase_diagram_sweep, zero_mode_census)
