"""Stroboscopic series, Fourier peaks, entanglement and scar identification."""
import math

import numpy as np
import pytest

from pxpfloquet import (ChainGeometry, DriveProtocol, SymmetrySector,
                        build_correlator, build_floquet_operator,
                        build_sector_basis, correlator_series,
                        diagonalize_floquet, fidelity_series, fourier_peak,
                        half_chain_entropy, identify_scars, initial_state)
from pxpfloquet.floquet import FloquetSpectrum
from pxpfloquet.observables import (ObservableSeries, eigenstate_entanglement,
                                    scar_gap_from_hamiltonian, state_overlaps,
                                    zero_mode_mask)

from oracles import as_dense, cached_basis


# --- initial states ---------------------------------------------------------

def test_neel_state_bit_pattern():
    basis = cached_basis(8)
    psi = initial_state(basis, "Z2")
    idx = np.flatnonzero(psi)
    assert len(idx) == 1
    assert int(basis.states[idx[0]]) == 0b01010101  # odd sites (1,3,5,7) up
    psi_bar = initial_state(basis, "Z2bar")
    assert int(basis.states[np.flatnonzero(psi_bar)[0]]) == 0b10101010


def test_cat_state_norm_and_support():
    basis = cached_basis(8)
    cat = initial_state(basis, "Z2plus")
    assert np.linalg.norm(cat) == pytest.approx(1.0)
    assert np.count_nonzero(cat) == 2
    assert np.allclose(cat[np.flatnonzero(cat)], 1 / math.sqrt(2))


def test_bitstring_initial_state():
    basis = cached_basis(6)
    psi = initial_state(basis, "010010")  # site-1-first rendering
    idx = np.flatnonzero(psi)[0]
    assert int(basis.states[idx]) == 0b010010  # bit 1 and bit 4 set
    with pytest.raises(ValueError):
        initial_state(basis, "110000")  # violates the constraint


def test_vacuum_state():
    basis = cached_basis(6)
    psi = initial_state(basis, "vacuum")
    assert int(basis.states[np.flatnonzero(psi)[0]]) == 0


# --- series -----------------------------------------------------------------

def test_correlator_series_against_direct_power():
    basis = cached_basis(8)
    evo = build_floquet_operator(basis, DriveProtocol(lam=15.0, omega=8.25))
    o22 = build_correlator(basis)
    psi0 = initial_state(basis, "Z2")
    series = correlator_series(psi0, evo, o22, 10)
    o = as_dense(o22)
    for n in (0, 3, 10):
        psi_n = np.linalg.matrix_power(evo.matrix, n) @ psi0
        assert series.values[n] == pytest.approx(
            float(np.real(psi_n.conj() @ o @ psi_n)), abs=1e-12)
    assert series.values[0] == pytest.approx(0.0)  # site 2 is down in Z2


def test_correlator_series_bounds():
    basis = cached_basis(10)
    evo = build_floquet_operator(basis, DriveProtocol(lam=15.0, omega=8.25))
    series = correlator_series(initial_state(basis, "Z2bar"), evo,
                               build_correlator(basis), 200)
    assert series.values[0] == pytest.approx(1.0)
    assert np.all(series.values >= -1e-12)
    assert np.all(series.values <= 1 + 1e-12)


def test_fidelity_series_bounds_and_revivals():
    basis = cached_basis(14)
    psi0 = initial_state(basis, "Z2")
    revival = fidelity_series(
        psi0, build_floquet_operator(basis, DriveProtocol(lam=15.0, omega=8.25)), 200)
    assert revival.values[0] == pytest.approx(1.0)
    assert np.all((revival.values >= -1e-12) & (revival.values <= 1 + 1e-12))
    assert revival.values[1:].max() > 0.5  # periodic revivals in the scar regime
    thermal = fidelity_series(
        psi0, build_floquet_operator(basis, DriveProtocol(lam=15.0, omega=7.75)), 200)
    assert thermal.values[50:].max() < 0.1  # decays without revival


# --- Fourier ----------------------------------------------------------------

def test_fourier_peak_on_synthetic_cosine():
    period = 0.5
    n = np.arange(512)
    target = 2.2  # angular frequency
    series = ObservableSeries(values=0.3 + 0.1 * np.cos(target * n * period),
                              observable="test")
    result = fourier_peak(series, period)
    assert not result.at_floor
    assert abs(result.omega_res - target) < result.bin_width


def test_fourier_constant_series_flagged():
    series = ObservableSeries(values=np.full(128, 0.25), observable="test")
    result = fourier_peak(series, 0.5)
    assert result.at_floor
    assert result.omega_res is None


def test_fourier_requires_minimum_length():
    series = ObservableSeries(values=np.zeros(32), observable="test")
    with pytest.raises(ValueError):
        fourier_peak(series, 0.5)


# --- entanglement -----------------------------------------------------------

def test_product_state_entropy_zero():
    basis = cached_basis(12)
    geometry = basis.geometry
    assert half_chain_entropy(initial_state(basis, "Z2"), geometry, basis) <= 1e-12
    assert half_chain_entropy(initial_state(basis, "vacuum"), geometry, basis) <= 1e-12


def test_cat_state_entropy_ln2():
    basis = cached_basis(12)
    s = half_chain_entropy(initial_state(basis, "Z2plus"), basis.geometry, basis)
    assert abs(s - math.log(2)) < 1e-10


@pytest.mark.parametrize("L", [8, 12])
def test_entropy_against_unconstrained_partial_trace(L):
    basis = cached_basis(L)
    rng = np.random.default_rng(11)
    v = rng.normal(size=basis.dim) + 1j * rng.normal(size=basis.dim)
    v /= np.linalg.norm(v)
    half = L // 2
    m = np.zeros((2 ** half, 2 ** half), dtype=complex)
    for amp, s in zip(v, basis.states):
        s = int(s)
        m[s & ((1 << half) - 1), s >> half] = amp
    p = np.linalg.svd(m, compute_uv=False) ** 2
    p = p[p > 1e-14]
    s_ref = float(-np.sum(p * np.log(p)))
    assert abs(half_chain_entropy(v, basis.geometry, basis) - s_ref) < 1e-9


def test_entropy_bound_and_validation():
    basis = cached_basis(8)
    rng = np.random.default_rng(5)
    v = rng.normal(size=basis.dim) + 1j * rng.normal(size=basis.dim)
    v /= np.linalg.norm(v)
    from pxpfloquet.basis import fibonacci
    assert half_chain_entropy(v, basis.geometry, basis) <= math.log(fibonacci(6))
    with pytest.raises(ValueError):
        half_chain_entropy(v[:5], basis.geometry, basis)
    with pytest.raises(ValueError):
        half_chain_entropy(v, ChainGeometry(9), None)


def test_sector_eigenstate_entanglement_embeds():
    basis = cached_basis(10)
    sector = build_sector_basis(basis, SymmetrySector(0, +1))
    spectrum = diagonalize_floquet(
        build_floquet_operator(sector, DriveProtocol(lam=15.0, omega=8.25)))
    s = eigenstate_entanglement(spectrum, sector, basis)
    assert s.shape == (sector.dim,)
    assert np.all(s >= 0)


# --- scars ------------------------------------------------------------------

def _synthetic_spectrum(energies, omega=10.0):
    dim = len(energies)
    return FloquetSpectrum(quasienergies=np.asarray(energies, dtype=float),
                           eigenvectors=np.eye(dim, dtype=complex),
                           omega=omega, basis_tag="synthetic")


def test_identify_scars_zero_modes_excluded():
    spectrum = _synthetic_spectrum([-2.0, 0.0, 2.0])
    psi0 = np.array([0.5, 1.0, 0.5], dtype=complex)
    psi0 /= np.linalg.norm(psi0)
    scars = identify_scars(spectrum, psi0, threshold=1e-2)
    assert 1 not in scars.members  # the zero mode carries most weight but is dropped
    assert set(scars.members) == {0, 2}
    assert scars.w_r == pytest.approx(4.0)


def test_tower_gap_merges_hybridized_doublets():
    # tower at +-1 and +-3 with each level split into a narrow doublet
    e = [-3.1, -3.0, -1.05, -1.0, 1.0, 1.05, 3.0, 3.1]
    big = 0.3
    small = 0.02
    overlaps = np.sqrt([small, big, big, small, small, big, big, small])
    spectrum = _synthetic_spectrum(e)
    scars = identify_scars(spectrum, overlaps.astype(complex) / np.linalg.norm(overlaps),
                           threshold=1e-3)
    assert scars.count == 8
    # representatives are the high-overlap members: -3.0, -1.05, +1.05, +3.0,
    # so the rep gaps are (1.95, 2.1, 1.95) with median 1.95
    assert scars.w_r == pytest.approx(1.95, abs=1e-9)


def test_empty_scar_set_for_delocalized_state():
    dim = 64
    spectrum = _synthetic_spectrum(np.linspace(-4, 4, dim))
    psi0 = np.full(dim, 1 / math.sqrt(dim), dtype=complex)
    scars = identify_scars(spectrum, psi0, threshold=1e-1)
    assert scars.count == 0
    assert scars.w_r is None


def test_static_scar_gap_matches_floquet_limit():
    # at very high drive frequency the driven gap approaches the undriven one
    basis = cached_basis(12)
    sector = build_sector_basis(basis, SymmetrySector(0, +1))
    psi = sector.project_vector(initial_state(basis, "Z2plus"))
    psi /= np.linalg.norm(psi)
    from pxpfloquet.operators import DEFAULT_W, build_h_spin
    w_inf = scar_gap_from_hamiltonian(build_h_spin(sector, DEFAULT_W, 0.0), psi)
    spectrum = diagonalize_floquet(
        build_floquet_operator(sector, DriveProtocol(lam=15.0, omega=400.0)))
    scars = identify_scars(spectrum, psi)
    assert scars.w_r == pytest.approx(w_inf, rel=1e-3)


def test_state_overlaps_sum_to_one(basis10):
    spectrum = diagonalize_floquet(
        build_floquet_operator(basis10, DriveProtocol(lam=15.0, omega=8.25)))
    psi0 = initial_state(basis10, "Z2")
    o = state_overlaps(spectrum, psi0)
    assert o.sum() == pytest.approx(1.0, abs=1e-10)
    assert zero_mode_mask(spectrum).sum() > 0
