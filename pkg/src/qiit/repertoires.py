"""Cause/effect repertoires and cause/effect information.

For a mechanism ``M`` and purview ``P`` the effect repertoire is obtained by
noising the complement of ``M``, applying the channel and reducing to ``P``;
the cause repertoire uses the dual channel instead.
"""

from dataclasses import dataclass
from itertools import product

import numpy as np

from .channels import PAULIS, Channel
from .operators import SupportedOperator, embed, ptrace
from .subsets import popcount, sites_of

EFFECT = "effect"
CAUSE = "cause"
DIRECTIONS = (EFFECT, CAUSE)


def _direction(direction: str) -> str:
    aliases = {"e": EFFECT, "effect": EFFECT, "c": CAUSE, "cause": CAUSE}
    try:
        return aliases[direction]
    except KeyError:
        raise ValueError(f"unknown direction {direction!r}") from None


def _state_matrix(psi):
    return psi.matrix if isinstance(psi, SupportedOperator) else np.asarray(psi, dtype=complex)


@dataclass(frozen=True, eq=False)
class Repertoire:
    direction: str
    purview: int
    mechanism: int
    state: SupportedOperator


class RepertoireTable:
    """Memo of ``rho^(x)(P|M)`` for one (channel, state) pair.

    Entries are plain arrays on the sites of ``P`` (ascending); the empty
    purview maps to the 1x1 matrix ``[[1]]`` and the empty mechanism to the
    exactly maximally mixed state.
    """

    def __init__(self, ch: Channel, psi):
        self.channel = ch
        self.n_sites = ch.n_sites
        self.local_dim = ch.local_dim
        self.psi = _state_matrix(psi)
        if self.psi.shape != (ch.dim, ch.dim):
            raise ValueError("state and channel dimensions differ")
        self._images = {}
        self._reps = {}

    def image(self, direction: str, mechanism: int) -> np.ndarray:
        """``U^(x)(Psi_M tensor 1/d**|M'|)`` on the full network."""
        key = (direction, mechanism)
        out = self._images.get(key)
        if out is None:
            n, d = self.n_sites, self.local_dim
            ms = sites_of(mechanism)
            noised = embed(ptrace(self.psi, tuple(range(n)), ms, d), ms, n, d)
            fn = self.channel._apply if direction == EFFECT else self.channel._dual
            out = fn(noised)
            self._images[key] = out
        return out

    def get(self, direction: str, purview: int, mechanism: int) -> np.ndarray:
        key = (direction, purview, mechanism)
        out = self._reps.get(key)
        if out is None:
            d = self.local_dim
            if purview == 0:
                out = np.ones((1, 1), dtype=complex)
            elif mechanism == 0:
                dim = d ** popcount(purview)
                out = np.eye(dim, dtype=complex) / dim
            else:
                full = self.image(direction, mechanism)
                out = ptrace(full, tuple(range(self.n_sites)), sites_of(purview), d)
                out = (out + out.conj().T) / 2
            self._reps[key] = out
        return out

    def materialize(self) -> dict:
        """All repertoires as ``{(direction, P, M): array}``."""
        size = 1 << self.n_sites
        for x in DIRECTIONS:
            for m in range(size):
                for p in range(size):
                    self.get(x, p, m)
        return dict(self._reps)


def repertoire(ch: Channel, psi, direction: str, purview: int, mechanism: int) -> Repertoire:
    direction = _direction(direction)
    table = RepertoireTable(ch, psi)
    m = table.get(direction, purview, mechanism)
    return Repertoire(direction, purview, mechanism,
                      SupportedOperator(sites_of(purview), m, ch.local_dim))


def trace_distance_to_mixed(rho: np.ndarray) -> float:
    dim = rho.shape[0]
    w = np.linalg.eigvalsh(rho - np.eye(dim) / dim)
    return 0.5 * float(np.sum(np.abs(w)))


def cause_effect_info(ch: Channel, psi, direction: str, purview: int, mechanism: int,
                      table: RepertoireTable = None) -> float:
    """Trace distance between ``rho^(x)(P|M)`` and ``1_P / d**|P|``."""
    direction = _direction(direction)
    table = table or RepertoireTable(ch, psi)
    if purview == 0 or mechanism == 0:
        return 0.0
    return trace_distance_to_mixed(table.get(direction, purview, mechanism))


def xi_table(ch: Channel, psi, direction: str = EFFECT, table: RepertoireTable = None):
    """``xi(P|M)`` for every pair of subsets, as an array indexed ``[P, M]``."""
    direction = _direction(direction)
    table = table or RepertoireTable(ch, psi)
    size = 1 << ch.n_sites
    out = np.zeros((size, size))
    for m in range(1, size):
        for p in range(1, size):
            out[p, m] = trace_distance_to_mixed(table.get(direction, p, m))
    return out


def average_xi(ch: Channel, psi, direction: str = EFFECT) -> float:
    """Uniform average of ``xi(P|M)`` over all ``4**n`` pairs of subsets
    (pairs involving the empty set contribute zero)."""
    xs = xi_table(ch, psi, direction)
    return float(xs.sum() / xs.size)


def xi_upper_bound(purity: float, local_dim: int, purview_size: int) -> float:
    """``sqrt(1/2 * ln(d**|P| * purity))``, the purity bound on ``xi``."""
    arg = (local_dim ** purview_size) * purity
    return float(np.sqrt(0.5 * np.log(max(arg, 1.0))))


# ---------------------------------------------------------------------------
# correlator form of the purity (qubits)
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CorrelatorTable:
    """``G[alpha, beta] = 2**-n Tr[sigma_alpha^P U(sigma_beta^M)]``.

    Pauli strings are indexed base-4 little-endian over the ascending sites
    (``alpha = sum_j alpha_j 4**j``), with label 0 the identity.
    """

    purview: int
    mechanism: int
    direction: str
    G: np.ndarray


def _pauli_on(labels, sites, n):
    factors = [PAULIS[0]] * n
    for a, s in zip(labels, sites):
        factors[s] = PAULIS[a]
    out = np.ones((1, 1), dtype=complex)
    for f in factors:
        out = np.kron(out, f)
    return out


def _strings(k):
    """Label tuples in little-endian index order."""
    return [tuple(reversed(t)) for t in product(range(4), repeat=k)]


def correlator_table(ch: Channel, purview: int, mechanism: int, direction: str = EFFECT) -> CorrelatorTable:
    if ch.local_dim != 2:
        raise ValueError("qubits only")
    direction = _direction(direction)
    n = ch.n_sites
    fn = ch._apply if direction == EFFECT else ch._dual
    ps, ms = sites_of(purview), sites_of(mechanism)
    alphas, betas = _strings(len(ps)), _strings(len(ms))
    images = [fn(_pauli_on(b, ms, n)) for b in betas]
    G = np.zeros((len(alphas), len(betas)), dtype=complex)
    for i, a in enumerate(alphas):
        sa = _pauli_on(a, ps, n)
        for j, img in enumerate(images):
            G[i, j] = np.sum(sa.T * img) / 2 ** n
    return CorrelatorTable(purview, mechanism, direction, G)


def _lambda_vector(table: CorrelatorTable, bloch) -> np.ndarray:
    ms = sites_of(table.mechanism)
    vecs = []
    for s in ms:
        v = bloch[s]
        vecs.append(np.concatenate([[1.0], np.asarray(v, dtype=float)]))
    out = []
    for labels in _strings(len(ms)):
        val = 1.0
        for v, a in zip(vecs, labels):
            val *= v[a]
        out.append(val)
    return np.array(out)


def purity_via_correlators(table: CorrelatorTable, bloch) -> float:
    """Purity of ``rho^(x)(P|M)`` from the correlator table.

    Args:
        table: correlators of the channel for ``(P, M)``.
        bloch: per-site Bloch vectors of the product-pure state (indexable
            by site; only the mechanism's sites are read).
    """
    lam = _lambda_vector(table, bloch)
    c = table.G @ lam
    return float(np.sum(np.abs(c) ** 2) / 2 ** popcount(table.purview))


def bloch_image(table: CorrelatorTable, bloch) -> np.ndarray:
    """Bloch vector ``G lambda`` of a single-qubit repertoire ``rho(j|i)``."""
    if popcount(table.purview) != 1 or popcount(table.mechanism) != 1:
        raise ValueError("Bloch image needs single-site purview and mechanism")
    (i,) = sites_of(table.mechanism)
    return np.real(table.G[1:, 1:] @ np.asarray(bloch[i], dtype=float))


# ---------------------------------------------------------------------------
# Haar average and Lieb-Robinson scans
# ---------------------------------------------------------------------------

def haar_average_purity(n_sites: int, local_dim: int, purview_size: int, mechanism_size: int) -> float:
    """Closed-form Haar mean of ``Tr rho_U(P|M)**2`` for a pure product state."""
    if not (0 <= purview_size <= n_sites and 0 <= mechanism_size <= n_sites):
        raise ValueError("subset sizes must lie in [0, n_sites]")
    d = float(local_dim)
    big = d ** n_sites
    total = 0.0
    for a in (1, -1):
        total += ((big + a * d ** mechanism_size) / (big + a)) * (
            d ** -purview_size + a * d ** -(n_sites - purview_size))
    return 0.5 * total


def haar_mc_purity(n_sites, local_dim, purview, mechanism, seeds, psi=None, direction=EFFECT):
    """Purities of ``rho_U(P|M)`` over Haar samples, one per seed."""
    from .channels import sample_haar, unitary_channel
    dim = local_dim ** n_sites
    if psi is None:
        psi = np.zeros((dim, dim), dtype=complex)
        psi[0, 0] = 1
    out = []
    for s in seeds:
        ch = unitary_channel(sample_haar(dim, s), n_sites, local_dim)
        rho = RepertoireTable(ch, psi).get(_direction(direction), purview, mechanism)
        out.append(float(np.real(np.vdot(rho.conj().T, rho))))
    return np.array(out)


def lr_decay_scan(ch: Channel, psi, net, mechanism: int, direction: str = EFFECT):
    """``xi({j}|M)`` for every site ``j`` with its graph distance to ``M``.

    Returns a list of ``(distance, site, xi)`` sorted by distance then site.
    """
    if net.geometry is None:
        raise ValueError("network has no geometry")
    from .network import subset_distance
    table = RepertoireTable(ch, psi)
    rows = []
    for j in range(ch.n_sites):
        p = 1 << j
        xi = trace_distance_to_mixed(table.get(_direction(direction), p, mechanism))
        rows.append((subset_distance(mechanism, p, net), j, xi))
    rows.sort()
    return rows


def decay_profile(rows):
    """Collapse an LR scan to ``(distance, max xi)`` pairs."""
    best = {}
    for dist, _, xi in rows:
        best[dist] = max(best.get(dist, 0.0), xi)
    return sorted(best.items())
