"""Unital trace-preserving CP maps on qudit networks.

Channels are stored as a pair of callables (the map and its Hilbert-Schmidt
dual) acting on full-network matrices. Reduced and partition-factorized
channels are evaluated by embedding, applying the parent channel and
tracing out, so no superoperator of the whole network is ever formed.
"""

from dataclasses import dataclass, field
from functools import reduce
from typing import Optional

import numpy as np

from .operators import TOL_UNITARY, SupportedOperator, embed, herm_expm, ptrace
from .subsets import full_mask, sites_of

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z)


class Channel:
    """A linear map on ``L(C^(d**n))`` together with its dual.

    Args:
        n_sites: number of sites the channel acts on.
        local_dim: local dimension ``d``.
        apply: callable mapping a ``d**n`` square matrix to another.
        dual_apply: the Hilbert-Schmidt adjoint of ``apply``.
        descriptor: short text used in logs, caches and CSV headers.
        unitary: the implementing unitary, when the channel is a conjugation.
    """

    def __init__(self, n_sites, local_dim, apply, dual_apply, descriptor="", unitary=None):
        self.n_sites = n_sites
        self.local_dim = local_dim
        self._apply = apply
        self._dual = dual_apply
        self.descriptor = descriptor
        self.unitary = unitary

    @property
    def dim(self) -> int:
        return self.local_dim ** self.n_sites

    def apply(self, x):
        if isinstance(x, SupportedOperator):
            return SupportedOperator(x.support, self._apply(x.matrix), x.local_dim)
        return self._apply(np.asarray(x, dtype=complex))

    def apply_dual(self, x):
        if isinstance(x, SupportedOperator):
            return SupportedOperator(x.support, self._dual(x.matrix), x.local_dim)
        return self._dual(np.asarray(x, dtype=complex))

    def __call__(self, x):
        return self.apply(x)

    def __repr__(self):
        return f"Channel({self.descriptor or '?'}, n={self.n_sites}, d={self.local_dim})"


# ---------------------------------------------------------------------------
# Hamiltonians
# ---------------------------------------------------------------------------

def site_operator(op: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    d = op.shape[0]
    left = np.eye(d ** site)
    right = np.eye(d ** (n_sites - site - 1))
    return np.kron(np.kron(left, op), right)


def pauli_string(labels, sites, n_sites) -> np.ndarray:
    """Product of Paulis (labels 0..3) on the given sites, identity elsewhere."""
    factors = [PAULI_I] * n_sites
    for a, s in zip(labels, sites):
        factors[s] = PAULIS[a]
    return reduce(np.kron, factors, np.ones((1, 1), dtype=complex))


def _two_body(n_sites, bonds, labels):
    h = np.zeros((2 ** n_sites, 2 ** n_sites), dtype=complex)
    for i, j in bonds:
        for a in labels:
            h += pauli_string((a, a), (i, j), n_sites)
    return h


def ring_bonds(n_sites):
    """Nearest-neighbour bonds with periodic closure, each edge once."""
    if n_sites < 2:
        return []
    if n_sites == 2:
        return [(0, 1)]
    return [(i, (i + 1) % n_sites) for i in range(n_sites)]


def full_bonds(n_sites):
    return [(i, j) for i in range(n_sites) for j in range(i + 1, n_sites)]


def xx_ring(n_sites: int) -> np.ndarray:
    """``sum_i (X_i X_{i+1} + Y_i Y_{i+1})`` with periodic boundary."""
    return _two_body(n_sites, ring_bonds(n_sites), (1, 2))


def xx_full(n_sites: int) -> np.ndarray:
    return _two_body(n_sites, full_bonds(n_sites), (1, 2))


def xxx_ring(n_sites: int) -> np.ndarray:
    return _two_body(n_sites, ring_bonds(n_sites), (1, 2, 3))


def xxx_full(n_sites: int) -> np.ndarray:
    return _two_body(n_sites, full_bonds(n_sites), (1, 2, 3))


def z_global(n_sites: int) -> np.ndarray:
    """``Z = tensor_i sigma^z_i``, diagonal with entries +-1."""
    return reduce(np.kron, [PAULI_Z] * n_sites, np.ones((1, 1), dtype=complex))


def sample_gue(dim: int, seed, variance: float = 1.0) -> np.ndarray:
    """GUE matrix: real diagonal with variance ``variance``; complex
    off-diagonal entries whose real and imaginary parts each carry
    ``variance / 2``."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    h = (a + a.conj().T) / 2
    # off-diagonal: Re, Im ~ N(0, 1/2); diagonal: Re ~ N(0, 1)
    return np.sqrt(variance) * h


def spectral_norm(h: np.ndarray) -> float:
    return float(np.max(np.abs(np.linalg.eigvalsh(h))))


# ---------------------------------------------------------------------------
# unitaries
# ---------------------------------------------------------------------------

def swap_unitary(d: int = 2) -> np.ndarray:
    s = np.zeros((d * d, d * d))
    for a in range(d):
        for b in range(d):
            s[b * d + a, a * d + b] = 1
    return s.astype(complex)


def permutation_unitary(perm, d: int = 2) -> np.ndarray:
    """Unitary moving the state of site ``i`` to site ``perm[i]``."""
    perm = list(perm)
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{perm} is not a permutation")
    dim = d ** n
    u = np.zeros((dim, dim), dtype=complex)
    for idx in range(dim):
        digits = np.unravel_index(idx, (d,) * n)
        out = [0] * n
        for i, x in enumerate(digits):
            out[perm[i]] = x
        u[np.ravel_multi_index(out, (d,) * n), idx] = 1
    return u


def cnot_unitary() -> np.ndarray:
    """Control on site 0, target on site 1."""
    u = np.eye(4, dtype=complex)
    u[[2, 3]] = u[[3, 2]]
    return u


def local_product_unitary(unitaries) -> np.ndarray:
    return reduce(np.kron, [np.asarray(u, dtype=complex) for u in unitaries],
                  np.ones((1, 1), dtype=complex))


def diagonal_unitary(phases) -> np.ndarray:
    return np.diag(np.exp(1j * np.asarray(phases, dtype=float)))


def sample_haar(dim: int, seed) -> np.ndarray:
    """Haar-distributed unitary from the QR decomposition of a Ginibre
    matrix with the phases of ``R``'s diagonal absorbed into ``Q``."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = np.random.default_rng(seed)
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def evolution_unitary(h: np.ndarray, t: float, sign: int = -1) -> np.ndarray:
    """``exp(i * sign * t * H)``; ``sign=-1`` is the Schroedinger convention."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return herm_expm(h, sign * t)


# ---------------------------------------------------------------------------
# declarative specs (used by the experiment configs)
# ---------------------------------------------------------------------------

HAMILTONIANS = {
    "xx-ring": xx_ring,
    "xx-full": xx_full,
    "xxx-ring": xxx_ring,
    "xxx-full": xxx_full,
    "z-global": z_global,
}


@dataclass
class HamiltonianSpec:
    kind: str
    n_sites: int
    local_dim: int = 2
    seed: Optional[int] = None
    variance: float = 1.0
    matrix: Optional[np.ndarray] = None

    def build(self) -> np.ndarray:
        if self.kind in HAMILTONIANS:
            if self.local_dim != 2:
                raise ValueError(f"{self.kind} is defined for qubits only")
            h = HAMILTONIANS[self.kind](self.n_sites)
        elif self.kind == "swap":
            if self.n_sites != 2:
                raise ValueError("swap generator needs 2 sites")
            h = swap_unitary(self.local_dim)
        elif self.kind == "gue":
            if self.seed is None:
                raise ValueError("GUE sampling needs an explicit seed")
            h = sample_gue(self.local_dim ** self.n_sites, self.seed, self.variance)
        elif self.kind == "custom":
            h = np.asarray(self.matrix, dtype=complex)
        else:
            raise ValueError(f"unknown Hamiltonian kind {self.kind!r}")
        if np.max(np.abs(h - h.conj().T)) > 1e-12:
            raise ValueError("Hamiltonian is not Hermitian")
        return h


@dataclass
class UnitarySpec:
    """``kind`` in {identity, expm, swap, permutation, cnot, local-product,
    haar, diagonal, custom}."""

    kind: str
    n_sites: int
    local_dim: int = 2
    hamiltonian: Optional[HamiltonianSpec] = None
    t: float = 0.0
    sign: int = -1
    perm: Optional[tuple] = None
    factors: Optional[list] = None
    phases: Optional[np.ndarray] = None
    seed: Optional[int] = None
    matrix: Optional[np.ndarray] = None
    extra: dict = field(default_factory=dict)

    def build(self) -> np.ndarray:
        d, n = self.local_dim, self.n_sites
        k = self.kind
        if k == "identity":
            u = np.eye(d ** n, dtype=complex)
        elif k == "expm":
            u = evolution_unitary(self.hamiltonian.build(), self.t, self.sign)
        elif k == "swap":
            if n != 2:
                raise ValueError("swap needs 2 sites")
            u = swap_unitary(d)
        elif k == "permutation":
            u = permutation_unitary(self.perm, d)
        elif k == "cnot":
            if (n, d) != (2, 2):
                raise ValueError("cnot needs 2 qubits")
            u = cnot_unitary()
        elif k == "local-product":
            u = local_product_unitary(self.factors)
        elif k == "haar":
            if self.seed is None:
                raise ValueError("Haar sampling needs an explicit seed")
            u = sample_haar(d ** n, self.seed)
        elif k == "diagonal":
            u = diagonal_unitary(self.phases)
        elif k == "custom":
            u = np.asarray(self.matrix, dtype=complex)
        else:
            raise ValueError(f"unknown unitary kind {k!r}")
        if u.shape != (d ** n, d ** n):
            raise ValueError(f"unitary has shape {u.shape}, expected {(d ** n,) * 2}")
        return u


# ---------------------------------------------------------------------------
# channel constructors
# ---------------------------------------------------------------------------

def unitary_channel(u, n_sites=None, local_dim=2, descriptor="") -> Channel:
    """Conjugation channel ``X -> U X U^dagger``.

    ``u`` is a matrix or a :class:`UnitarySpec`.
    """
    if isinstance(u, UnitarySpec):
        descriptor = descriptor or f"unitary:{u.kind}"
        n_sites, local_dim = u.n_sites, u.local_dim
        u = u.build()
    u = np.asarray(u, dtype=complex)
    if n_sites is None:
        n_sites = int(round(np.log(u.shape[0]) / np.log(local_dim)))
    if u.shape != (local_dim ** n_sites,) * 2:
        raise ValueError("unitary dimension does not match the network")
    if np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))) > TOL_UNITARY:
        raise ValueError("matrix is not unitary")
    ud = u.conj().T
    return Channel(n_sites, local_dim,
                   lambda x: u @ x @ ud,
                   lambda x: ud @ x @ u,
                   descriptor or "unitary", unitary=u)


def identity_channel(n_sites, local_dim=2) -> Channel:
    return unitary_channel(np.eye(local_dim ** n_sites), n_sites, local_dim, "identity")


def dual(ch: Channel) -> Channel:
    """Hilbert-Schmidt adjoint; for a conjugation by ``U`` this is
    conjugation by ``U^dagger``."""
    u = None if ch.unitary is None else ch.unitary.conj().T
    name = ch.descriptor[:-5] if ch.descriptor.endswith(":dual") else ch.descriptor + ":dual"
    return Channel(ch.n_sites, ch.local_dim, ch._dual, ch._apply, name, unitary=u)


def compose(outer: Channel, inner: Channel) -> Channel:
    """``outer o inner``."""
    if (outer.n_sites, outer.local_dim) != (inner.n_sites, inner.local_dim):
        raise ValueError("channels act on different networks")
    u = None
    if outer.unitary is not None and inner.unitary is not None:
        u = outer.unitary @ inner.unitary
    return Channel(inner.n_sites, inner.local_dim,
                   lambda x: outer._apply(inner._apply(x)),
                   lambda x: inner._dual(outer._dual(x)),
                   f"({outer.descriptor})o({inner.descriptor})", unitary=u)


def reduced_channel(ch: Channel, omega: int) -> Channel:
    """``X -> Tr_{omega'} U(X tensor 1_{omega'} / d**|omega'|)`` on the
    subnetwork ``omega`` (sites relabelled ``0..|omega|-1`` in order)."""
    if omega == 0:
        raise ValueError("reduced channel needs a non-empty subnetwork")
    n, d = ch.n_sites, ch.local_dim
    if omega & ~full_mask(n):
        raise ValueError("subnetwork outside the network")
    keep = sites_of(omega)
    everything = tuple(range(n))
    if len(keep) == n:
        return ch

    def fwd(x):
        return ptrace(ch._apply(embed(x, keep, n, d)), everything, keep, d)

    def bwd(x):
        return ptrace(ch._dual(embed(x, keep, n, d)), everything, keep, d)

    return Channel(len(keep), d, fwd, bwd, f"{ch.descriptor}|reduced{list(keep)}")


def _product_map(map1, map2, sites1, sites2, n, d):
    """Evaluate ``map1 tensor map2`` on a full-network matrix.

    The input is expanded in matrix units of side 1; each block is pushed
    through ``map2`` and recombined with the image of the unit under
    ``map1``. Costs ``d**(2|side1|)`` evaluations of each map.
    """
    k1, k2 = len(sites1), len(sites2)
    d1, d2 = d ** k1, d ** k2
    order = sites1 + sites2
    to_split = tuple(order) + tuple(s + n for s in order)
    inv = np.argsort(order)
    from_split = tuple(inv) + tuple(i + n for i in inv)
    units = [map1(_unit(i, j, d1)) for i in range(d1) for j in range(d1)]

    def apply(x):
        t = x.reshape((d,) * (2 * n)).transpose(to_split).reshape(d1, d2, d1, d2)
        out = np.zeros((d1, d2, d1, d2), dtype=complex)
        for i in range(d1):
            for j in range(d1):
                block = t[i, :, j, :]
                if not block.any():
                    continue
                img = map2(np.ascontiguousarray(block))
                out += np.einsum("ab,cd->acbd", units[i * d1 + j], img)
        dim = d1 * d2
        return (out.reshape((d,) * (2 * n)).transpose(from_split)).reshape(dim, dim)

    return apply


def _unit(i, j, dim):
    e = np.zeros((dim, dim), dtype=complex)
    e[i, j] = 1
    return e


def partitioned_channel(ch: Channel, bipartition) -> Channel:
    """``U_1 tensor U_2`` built from the reduced channels on each side."""
    n, d = ch.n_sites, ch.local_dim
    a, b = bipartition.part1, bipartition.part2
    if a & b or (a | b) != full_mask(n):
        raise ValueError("not a bipartition of this network")
    r1, r2 = reduced_channel(ch, a), reduced_channel(ch, b)
    s1, s2 = sites_of(a), sites_of(b)
    fwd = _product_map(r1._apply, r2._apply, s1, s2, n, d)
    bwd = _product_map(r1._dual, r2._dual, s1, s2, n, d)
    return Channel(n, d, fwd, bwd, f"{ch.descriptor}|cut{bipartition}")


def hs_inner(x: np.ndarray, y: np.ndarray) -> complex:
    """Hilbert-Schmidt pairing ``Tr(X^dagger Y)``."""
    return complex(np.vdot(x, y))
