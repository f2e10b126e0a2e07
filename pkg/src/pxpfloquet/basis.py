"""Constrained spin basis (no two adjacent up-spins) and symmetry machinery.

States are stored as bitmasks: site 1 is the least-significant bit and a set
bit means an up-spin (Rydberg excitation).  Periodic chains treat bit L and
bit 1 as neighbours.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse

MAX_SITES = 32


def fibonacci(n: int) -> int:
    """Exact Fibonacci number with F_1 = F_2 = 1 (arbitrary precision)."""
    if n < 1:
        raise ValueError(f"fibonacci defined for n >= 1, got {n}")
    a, b = 1, 1
    for _ in range(n - 1):
        a, b = b, a + b
    return a


@dataclass(frozen=True)
class ChainGeometry:
    """Chain length and boundary condition."""

    L: int
    boundary: str = "periodic"

    def __post_init__(self):
        if not isinstance(self.L, int) or self.L < 2:
            raise ValueError(f"chain length must be an integer >= 2, got {self.L}")
        if self.L > MAX_SITES:
            raise ValueError(
                f"L={self.L} exceeds the {MAX_SITES}-bit state-word limit"
            )
        if self.boundary not in ("periodic", "open"):
            raise ValueError(f"unknown boundary {self.boundary!r}")

    @property
    def periodic(self) -> bool:
        return self.boundary == "periodic"

    @property
    def mask(self) -> int:
        return (1 << self.L) - 1


def rotate_left(state: int, r: int, L: int) -> int:
    """Cyclic left rotation of an L-bit word: site j -> j + r (mod L)."""
    r %= L
    mask = (1 << L) - 1
    return ((state << r) | (state >> (L - r))) & mask


def reflect_state(state: int, L: int) -> int:
    """Bond-centered reflection, site j -> L + 1 - j (bit reversal)."""
    out = 0
    for i in range(L):
        if (state >> i) & 1:
            out |= 1 << (L - 1 - i)
    return out


def q_phase(state: int, L: int) -> int:
    """Eigenvalue of Q = prod_j sigma^z_j: +1 for an even number of down-spins."""
    n_down = L - int(state).bit_count()
    return 1 if n_down % 2 == 0 else -1


def apply_symmetry(state: int, geometry: ChainGeometry, op: str, r: int = 1):
    """Apply a symmetry operation to a basis state.

    op is one of 'translate' (by r sites), 'reflect' or 'Q'.  Returns the
    mapped bitmask and the accompanying phase (+-1).
    """
    L = geometry.L
    if op == "translate":
        if not geometry.periodic:
            raise ValueError("translation requires a periodic chain")
        return rotate_left(state, r, L), 1
    if op == "reflect":
        return reflect_state(state, L), 1
    if op == "Q":
        return state, q_phase(state, L)
    raise ValueError(f"unknown symmetry operation {op!r}")


def _open_chain_states(L: int) -> list[int]:
    """All L-bit words without adjacent set bits (open chain), unsorted."""
    # grow site by site, tracking whether the last site is up
    end_down, end_up = [0], [1]
    for site in range(1, L):
        bit = 1 << site
        new_up = [s | bit for s in end_down]
        end_down = end_down + end_up
        end_up = new_up
    return end_down + end_up


@dataclass(frozen=True)
class ConstrainedBasis:
    """Sorted constrained basis with an exact inverse index map."""

    geometry: ChainGeometry
    states: np.ndarray
    index: dict = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.states)

    def index_of(self, state: int) -> int:
        return self.index[int(state)]

    def __contains__(self, state: int) -> bool:
        return int(state) in self.index


def enumerate_basis(geometry: ChainGeometry) -> ConstrainedBasis:
    """Enumerate all constraint-satisfying states, sorted ascending.

    The dimension is F_{L-1} + F_{L+1} for periodic chains and F_{L+2} for
    open chains.
    """
    L = geometry.L
    states = _open_chain_states(L)
    if geometry.periodic:
        hi = 1 << (L - 1)
        states = [s for s in states if not ((s & 1) and (s & hi))]
    states.sort()
    expected = (
        fibonacci(L - 1) + fibonacci(L + 1) if geometry.periodic else fibonacci(L + 2)
    )
    if len(states) != expected:
        raise AssertionError(
            f"basis size {len(states)} does not match Fibonacci count {expected}"
        )
    arr = np.asarray(states, dtype=np.int64)
    index = {int(s): i for i, s in enumerate(states)}
    return ConstrainedBasis(geometry=geometry, states=arr, index=index)


def flippable_sites(state: int, geometry: ChainGeometry) -> list[int]:
    """Sites (0-based) whose spin may flip: all existing neighbours down."""
    L = geometry.L
    sites = []
    for i in range(L):
        if geometry.periodic:
            left = (state >> ((i - 1) % L)) & 1
            right = (state >> ((i + 1) % L)) & 1
        else:
            left = (state >> (i - 1)) & 1 if i > 0 else 0
            right = (state >> (i + 1)) & 1 if i < L - 1 else 0
        if left == 0 and right == 0:
            sites.append(i)
    return sites


def count_pxp_pairs(geometry: ChainGeometry) -> int:
    """Number of ordered basis-state pairs connected by sum_l sigma-tilde^x_l.

    Counted directly from the basis; equals 2 L F_{L-1} on a periodic chain.
    """
    if not geometry.periodic:
        raise ValueError("pair counting is defined for periodic chains")
    if geometry.L < 3:
        raise ValueError("pair counting requires L >= 3")
    basis = enumerate_basis(geometry)
    return sum(len(flippable_sites(int(s), geometry)) for s in basis.states)


@dataclass(frozen=True)
class SymmetrySector:
    """Momentum / bond-parity quantum numbers (only k = 0 is supported)."""

    momentum: int = 0
    parity: int = 1

    def __post_init__(self):
        if self.momentum != 0:
            raise NotImplementedError("only the k = 0 momentum sector is supported")
        if self.parity not in (+1, -1):
            raise ValueError("parity must be +1 or -1")

    @property
    def tag(self) -> str:
        return f"K={self.momentum},P={'+' if self.parity > 0 else '-'}1"


@dataclass(frozen=True)
class SectorBasis:
    """Symmetry-adapted basis: orbit representatives and the embedding map.

    ``embed`` is a (full_dim x sector_dim) sparse matrix with orthonormal
    columns; sector vectors are expressed in the full constrained basis via
    ``embed @ v``.
    """

    basis: ConstrainedBasis
    sector: SymmetrySector
    representatives: np.ndarray
    norms: np.ndarray
    embed: scipy.sparse.csc_matrix = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.representatives)

    def embed_vector(self, v: np.ndarray) -> np.ndarray:
        """Lift a sector vector to the full constrained basis."""
        return self.embed @ v

    def project_vector(self, psi_full: np.ndarray) -> np.ndarray:
        """Sector coordinates of a full-basis vector (adjoint of embed)."""
        return self.embed.conj().T @ psi_full

    def project_operator(self, op) -> np.ndarray:
        """Dense sector block E^dag O E of a full-basis operator."""
        out = self.embed.conj().T @ (op @ self.embed)
        if scipy.sparse.issparse(out):
            out = out.toarray()
        return np.asarray(out)


def build_sector_basis(basis: ConstrainedBasis, sector: SymmetrySector) -> SectorBasis:
    """Build the k = 0, parity +-1 symmetry-adapted basis.

    Each orbit of the 2L-element group {T^r, R T^r} contributes at most one
    normalized symmetrized vector; orbits incompatible with the requested
    parity are dropped.
    """
    geometry = basis.geometry
    if not geometry.periodic:
        raise ValueError("symmetry sectors require a periodic chain")
    L = geometry.L
    p = sector.parity

    reps, norms = [], []
    rows, cols, data = [], [], []
    visited = set()
    for s in basis.states:
        s = int(s)
        if s in visited:
            continue
        amps: dict[int, float] = {}
        for r in range(L):
            t = rotate_left(s, r, L)
            amps[t] = amps.get(t, 0.0) + 1.0
        for r in range(L):
            t = reflect_state(rotate_left(s, r, L), L)
            amps[t] = amps.get(t, 0.0) + p
        visited.update(amps)
        nrm = math.sqrt(sum(a * a for a in amps.values()))
        if nrm < 1e-12:
            continue
        col = len(reps)
        reps.append(s)
        norms.append(nrm)
        for t, a in amps.items():
            if a != 0.0:
                rows.append(basis.index_of(t))
                cols.append(col)
                data.append(a / nrm)

    embed = scipy.sparse.csc_matrix(
        (data, (rows, cols)), shape=(basis.dim, len(reps)), dtype=np.float64
    )
    return SectorBasis(
        basis=basis,
        sector=sector,
        representatives=np.asarray(reps, dtype=np.int64),
        norms=np.asarray(norms),
        embed=embed,
    )


def translation_orbit_count(basis: ConstrainedBasis) -> int:
    """Number of distinct translation orbits of the constrained basis."""
    L = basis.geometry.L
    visited = set()
    count = 0
    for s in basis.states:
        s = int(s)
        if s in visited:
            continue
        visited.update(rotate_left(s, r, L) for r in range(L))
        count += 1
    return count
