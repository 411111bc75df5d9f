"""Qudit networks: sites, initial states, geometry, and the combinatorics of
subsets, bipartitions and mechanism/purview pairings."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .operators import SupportedOperator, embed, is_density_operator, ptrace
from .subsets import complement, full_mask, lowest_site, popcount, sites_of, submasks

KET_TOL = 1e-12
DENSITY_TOL = 1e-10


class StateError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class StateSpec:
    """Initial network state.

    ``kind`` is ``"product"`` (one ket per site), ``"bloch"`` (one unit
    Bloch vector per qubit) or ``"explicit"`` (a full density matrix).
    """

    kind: str
    kets: Optional[tuple] = None
    bloch: Optional[tuple] = None
    matrix: Optional[np.ndarray] = None

    @classmethod
    def product(cls, kets):
        return cls("product", kets=tuple(np.asarray(k, dtype=complex) for k in kets))

    @classmethod
    def from_bloch(cls, vectors):
        return cls("bloch", bloch=tuple(np.asarray(v, dtype=float) for v in vectors))

    @classmethod
    def explicit(cls, matrix):
        return cls("explicit", matrix=np.asarray(matrix, dtype=complex))

    @classmethod
    def uniform(cls, ket, n_sites):
        return cls.product([ket] * n_sites)


@dataclass(frozen=True, eq=False)
class Network:
    """The triple (sites, local dimension, initial state) plus an optional
    graph-distance table used by the Lieb-Robinson scans."""

    n_sites: int
    local_dim: int
    state: StateSpec
    geometry: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError("n_sites must be >= 1")
        if self.local_dim < 2:
            raise ValueError("local_dim must be >= 2")
        if self.geometry is not None:
            g = np.asarray(self.geometry, dtype=float)
            if g.shape != (self.n_sites, self.n_sites):
                raise ValueError("geometry table has the wrong shape")
            if not np.allclose(g, g.T) or np.any(np.diag(g) != 0):
                raise ValueError("geometry must be symmetric with zero diagonal")
            object.__setattr__(self, "geometry", g)

    @property
    def dim(self) -> int:
        return self.local_dim ** self.n_sites

    @property
    def full(self) -> int:
        return full_mask(self.n_sites)


# ---------------------------------------------------------------------------
# named states
# ---------------------------------------------------------------------------

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)
KET_PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)
KET_MINUS = np.array([1, -1], dtype=complex) / np.sqrt(2)


def named_ket(symbol: str, d: int = 2) -> np.ndarray:
    """Single-site ket from ``0``, ``1``, ..., ``+``, ``-``."""
    if symbol == "+":
        return np.ones(d, dtype=complex) / np.sqrt(d)
    if symbol == "-":
        if d != 2:
            raise StateError("'-' is only defined for qubits")
        return KET_MINUS.copy()
    k = int(symbol)
    if not 0 <= k < d:
        raise StateError(f"basis label {k} out of range for d={d}")
    v = np.zeros(d, dtype=complex)
    v[k] = 1
    return v


def bell_state() -> np.ndarray:
    psi = np.zeros(4, dtype=complex)
    psi[0] = psi[3] = 1 / np.sqrt(2)
    return np.outer(psi, psi.conj())


def bloch_to_ket(v) -> np.ndarray:
    """Pure qubit ket with Bloch vector ``v`` (|v| = 1)."""
    x, y, z = v
    theta = np.arccos(np.clip(z, -1, 1))
    phi = np.arctan2(y, x)
    return np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def build_state(net: Network) -> SupportedOperator:
    """Density operator of the network's initial state on all sites."""
    spec = net.state
    d, n = net.local_dim, net.n_sites
    if spec.kind in ("product", "bloch"):
        if spec.kind == "bloch":
            if d != 2:
                raise StateError("Bloch vectors require qubits")
            vecs = spec.bloch
            for v in vecs:
                if v.shape != (3,) or abs(np.linalg.norm(v) - 1) > KET_TOL:
                    raise StateError("Bloch vectors must be unit 3-vectors")
            kets = [bloch_to_ket(v) for v in vecs]
        else:
            kets = spec.kets
        if len(kets) != n:
            raise StateError(f"expected {n} site kets, got {len(kets)}")
        psi = np.ones(1, dtype=complex)
        for k in kets:
            if k.shape != (d,):
                raise StateError(f"ket has shape {k.shape}, expected ({d},)")
            if abs(np.linalg.norm(k) - 1) > KET_TOL:
                raise StateError("site ket is not normalized")
            psi = np.kron(psi, k)
        return SupportedOperator(tuple(range(n)), np.outer(psi, psi.conj()), d)
    if spec.kind == "explicit":
        m = spec.matrix
        if m.shape != (d ** n, d ** n):
            raise StateError(f"explicit state has shape {m.shape}")
        if not is_density_operator(m, DENSITY_TOL):
            raise StateError("explicit state is not a valid density operator")
        return SupportedOperator(tuple(range(n)), (m + m.conj().T) / 2, d)
    raise StateError(f"unknown state kind {spec.kind!r}")


def product_bloch_vectors(net: Network):
    """Per-site Bloch vectors of a product-pure qubit state, or ``None``."""
    if net.local_dim != 2:
        return None
    if net.state.kind == "bloch":
        return [np.asarray(v, dtype=float) for v in net.state.bloch]
    if net.state.kind == "product":
        paulis = _paulis()
        out = []
        for k in net.state.kets:
            rho = np.outer(k, k.conj())
            out.append(np.array([np.real(np.trace(rho @ p)) for p in paulis[1:]]))
        return out
    return None


def _paulis():
    return [
        np.eye(2, dtype=complex),
        np.array([[0, 1], [1, 0]], dtype=complex),
        np.array([[0, -1j], [1j, 0]], dtype=complex),
        np.array([[1, 0], [0, -1]], dtype=complex),
    ]


def noising(rho: SupportedOperator, omega: int) -> SupportedOperator:
    """Replace the state on ``omega`` by the maximally mixed one:
    ``(Tr_omega rho) tensor 1_omega / d**|omega|``."""
    n = rho.n_sites
    if rho.support != tuple(range(n)):
        raise ValueError("noising acts on full-network operators")
    d = rho.local_dim
    keep = sites_of(complement(omega, n))
    reduced = ptrace(rho.matrix, rho.support, keep, d)
    return SupportedOperator(rho.support, embed(reduced, keep, n, d), d)


def enumerate_subsets(n_sites: int):
    """All ``2**n`` subsets as masks, ascending."""
    return iter(range(1 << n_sites))


@dataclass(frozen=True)
class Bipartition:
    """Unordered cut ``{part1, part2}``; canonical ``part1`` holds site 0."""

    part1: int
    n_sites: int

    def __post_init__(self):
        full = full_mask(self.n_sites)
        if self.part1 <= 0 or self.part1 >= full or self.part1 & ~full:
            raise ValueError("bipartition parts must be non-empty and proper")
        if not self.part1 & 1:
            object.__setattr__(self, "part1", full & ~self.part1)

    @property
    def part2(self) -> int:
        return complement(self.part1, self.n_sites)

    @property
    def parts(self):
        return (self.part1, self.part2)

    @property
    def smaller_size(self) -> int:
        return min(popcount(self.part1), popcount(self.part2))

    def side_of(self, mask: int):
        """1 or 2 when ``mask`` lies on one side, ``None`` when it straddles."""
        if mask & ~self.part1 == 0:
            return 1
        if mask & self.part1 == 0:
            return 2
        return None

    def straddles(self, mask: int) -> bool:
        return bool(mask & self.part1) and bool(mask & self.part2)

    def __str__(self):
        from .subsets import format_mask
        return f"{format_mask(self.part1)}|{format_mask(self.part2)}"


def enumerate_bipartitions(n_sites: int):
    """The ``2**(n-1) - 1`` bipartitions, ascending canonical ``part1`` mask."""
    full = full_mask(n_sites)
    for m in range(1, full, 2):
        yield Bipartition(m, n_sites)


def boundary(bp: Bipartition):
    """Subsets meeting both sides of the cut."""
    return [s for s in range(1 << bp.n_sites) if bp.straddles(s)]


def boundary_size(bp: Bipartition) -> int:
    n1, n2 = popcount(bp.part1), popcount(bp.part2)
    return 2 ** bp.n_sites - 2 ** n1 - 2 ** n2 + 1


@dataclass(frozen=True)
class Pairing:
    """Split of purview ``P = p1 + p2`` and mechanism ``M = m1 + m2``; the
    two halves are paired as ``(p1|m1)`` and ``(p2|m2)``."""

    p1: int
    m1: int
    p2: int
    m2: int


def enumerate_pairings(purview: int, mechanism: int):
    """Non-trivial pairings of ``(purview, mechanism)``.

    Order the elements as the purview sites (ascending) followed by the
    mechanism sites; the first element always goes to the first pair, which
    removes the ``{pair1, pair2}`` symmetry. The trivial pairing
    ``(P|M), (0|0)`` is skipped, leaving ``2**(|P|+|M|-1) - 1`` items.
    """
    if purview:
        anchor_p, anchor_m = lowest_site(purview), None
    elif mechanism:
        anchor_p, anchor_m = None, lowest_site(mechanism)
    else:
        return
    for p1 in submasks(purview):
        if anchor_p is not None and not p1 >> anchor_p & 1:
            continue
        for m1 in submasks(mechanism):
            if anchor_m is not None and not m1 >> anchor_m & 1:
                continue
            if p1 == purview and m1 == mechanism:
                continue
            yield Pairing(p1, m1, purview & ~p1, mechanism & ~m1)


def ring_geometry(n_sites: int) -> np.ndarray:
    i = np.arange(n_sites)
    diff = np.abs(i[:, None] - i[None, :])
    return np.minimum(diff, n_sites - diff).astype(float)


def chain_geometry(n_sites: int) -> np.ndarray:
    i = np.arange(n_sites)
    return np.abs(i[:, None] - i[None, :]).astype(float)


def complete_geometry(n_sites: int) -> np.ndarray:
    return 1.0 - np.eye(n_sites)


def subset_distance(m: int, p: int, net: Network) -> float:
    """``min_{x in M, y in P} d(x, y)`` over the network geometry."""
    if net.geometry is None:
        raise ValueError("network has no geometry")
    if not m or not p:
        raise ValueError("distance needs non-empty subsets")
    ms, ps = list(sites_of(m)), list(sites_of(p))
    return float(net.geometry[np.ix_(ms, ps)].min())
