"""Constrained-basis enumeration, symmetries and sector construction."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pxpfloquet import (ChainGeometry, SymmetrySector, build_sector_basis,
                        count_pxp_pairs, enumerate_basis, fibonacci)
from pxpfloquet.basis import (apply_symmetry, flippable_sites, q_phase,
                              reflect_state, rotate_left,
                              translation_orbit_count)

from oracles import cached_basis


def brute_force_states(L, periodic):
    out = []
    for s in range(1 << L):
        ok = True
        for i in range(L if periodic else L - 1):
            if (s >> i) & 1 and (s >> ((i + 1) % L)) & 1:
                ok = False
                break
        if ok:
            out.append(s)
    return out


def test_fibonacci_small_values():
    assert [fibonacci(n) for n in range(1, 11)] == [1, 1, 2, 3, 5, 8, 13, 21, 34, 55]
    with pytest.raises(ValueError):
        fibonacci(0)


def test_fibonacci_recurrence_large():
    for n in range(3, 90):
        assert fibonacci(n) == fibonacci(n - 1) + fibonacci(n - 2)


@pytest.mark.parametrize("L", [4, 6, 8, 10, 12])
@pytest.mark.parametrize("boundary", ["periodic", "open"])
def test_enumeration_matches_brute_force(L, boundary):
    basis = cached_basis(L, boundary)
    expected = brute_force_states(L, boundary == "periodic")
    assert [int(s) for s in basis.states] == expected


@pytest.mark.parametrize("L", [4, 5, 6, 7, 8, 10, 12, 14])
def test_dimension_laws(L):
    assert cached_basis(L, "periodic").dim == fibonacci(L - 1) + fibonacci(L + 1)
    assert cached_basis(L, "open").dim == fibonacci(L + 2)


def test_index_roundtrip(basis10):
    for n, s in enumerate(basis10.states):
        assert basis10.index_of(int(s)) == n
        assert int(s) in basis10
    assert 3 not in basis10  # adjacent up-spins


@pytest.mark.parametrize("L", [4, 6, 8, 10])
def test_pair_count_matches_flip_enumeration(L):
    basis = cached_basis(L)
    geometry = basis.geometry
    n_flips = sum(len(flippable_sites(int(s), geometry)) for s in basis.states)
    assert n_flips == count_pxp_pairs(geometry) == 2 * L * fibonacci(L - 1)


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=3, max_value=16), st.integers(min_value=0, max_value=2 ** 16 - 1))
def test_rotation_and_reflection_properties(L, raw):
    state = raw & ((1 << L) - 1)
    assert rotate_left(rotate_left(state, 1, L), L - 1, L) == state
    assert reflect_state(reflect_state(state, L), L) == state
    assert q_phase(state, L) in (-1, 1)
    # reflection maps site j -> L+1-j (1-based): site 0 <-> site L-1
    assert (reflect_state(state, L) >> (L - 1)) & 1 == state & 1


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=4, max_value=12))
def test_symmetries_preserve_constraint(L):
    basis = cached_basis(L)
    geometry = basis.geometry
    for s in basis.states[:: max(1, basis.dim // 10)]:
        for r in range(L):
            assert apply_symmetry(int(s), geometry, "translate", r)[0] in basis
        assert apply_symmetry(int(s), geometry, "reflect")[0] in basis


@pytest.mark.parametrize("L", [4, 6, 8, 10])
def test_sector_embed_is_isometry(L):
    basis = cached_basis(L)
    for parity in (+1, -1):
        sector = build_sector_basis(basis, SymmetrySector(0, parity))
        if sector.dim == 0:
            continue
        e = sector.embed.toarray()
        assert np.allclose(e.conj().T @ e, np.eye(sector.dim), atol=1e-12)


def test_sector_example_small_chain():
    basis = cached_basis(4)
    plus = build_sector_basis(basis, SymmetrySector(0, +1))
    minus = build_sector_basis(basis, SymmetrySector(0, -1))
    assert plus.dim == 3
    assert minus.dim == 0
    assert sorted(int(r) for r in plus.representatives) == [0b0000, 0b0001, 0b0101]


@pytest.mark.parametrize("L", [6, 8, 10, 12])
def test_k0_sectors_span_translation_invariant_space(L):
    basis = cached_basis(L)
    n_orbits = translation_orbit_count(basis)
    plus = build_sector_basis(basis, SymmetrySector(0, +1))
    minus = build_sector_basis(basis, SymmetrySector(0, -1))
    # K=0 states split between the two bond-parity sectors
    assert plus.dim + minus.dim == n_orbits


def test_geometry_validation():
    with pytest.raises(ValueError):
        ChainGeometry(1)
    with pytest.raises(ValueError):
        ChainGeometry(8, "twisted")
    with pytest.raises(ValueError):
        ChainGeometry(40)
