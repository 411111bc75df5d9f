"""Mechanism-level integrated information, core purviews and conceptual
structures.

The work is organised around a repertoire dictionary
``{(direction, P, M): array}``; every ``phi(P|M)`` is a minimum of trace
distances between ``rho(P|M)`` and the products ``rho(P1|M1) x rho(P2|M2)``
over the non-trivial pairings. Pairings sharing a purview split are
stacked so the trace norms can be taken with one batched ``eigvalsh``.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .network import Pairing
from .operators import kron_sorted, kron_sorted_batch
from .repertoires import CAUSE, DIRECTIONS, EFFECT, RepertoireTable, _direction
from .subsets import lowest_site, popcount, sites_of, submasks

EPS_PHI = 1e-9


@dataclass(frozen=True)
class MechanismPhi:
    direction: str
    purview: int
    mechanism: int
    value: float
    pairing: Pairing


@dataclass(frozen=True, eq=False)
class Concept:
    """A mechanism with ``phi(M) = min(phi_e, phi_c) > EPS_PHI``.

    ``rep_effect`` / ``rep_cause`` are the core repertoires on the sites of
    the corresponding core purview; the global repertoire is that state
    padded with ``1/d`` on every other site.
    """

    mechanism: int
    core_effect: int
    core_cause: int
    phi_effect: float
    phi_cause: float
    rep_effect: np.ndarray
    rep_cause: np.ndarray

    @property
    def phi(self) -> float:
        return min(self.phi_effect, self.phi_cause)

    def core(self, direction):
        return self.core_effect if direction == EFFECT else self.core_cause

    def rep(self, direction):
        return self.rep_effect if direction == EFFECT else self.rep_cause


@dataclass(eq=False)
class PhiTable:
    """``phi^(x)(P|M)`` for every non-empty ``P, M``, arrays indexed ``[P, M]``."""

    n_sites: int
    local_dim: int
    values: dict
    argmins: dict = field(default_factory=dict)

    def get(self, direction, purview, mechanism) -> float:
        return float(self.values[direction][purview, mechanism])


@dataclass(eq=False)
class ConceptualStructure:
    n_sites: int
    local_dim: int
    concepts: dict
    provenance: str = ""
    reps: dict = field(default=None, repr=False)
    phi_table: PhiTable = field(default=None, repr=False)

    def __len__(self):
        return len(self.concepts)

    def __iter__(self):
        return iter(sorted(self.concepts))

    def total_phi(self) -> float:
        """``Tr C = sum_M phi(M)``."""
        return float(sum(c.phi for c in self.concepts.values()))

    def mechanisms(self):
        return sorted(self.concepts)


# ---------------------------------------------------------------------------
# phi(P|M)
# ---------------------------------------------------------------------------

def _pairing_groups(purview, mechanism):
    """Pairings grouped by purview split, in :func:`enumerate_pairings` order."""
    anchor = lowest_site(purview)
    groups = []
    for p1 in submasks(purview):
        if not p1 >> anchor & 1:
            continue
        m1s = [m1 for m1 in submasks(mechanism) if not (p1 == purview and m1 == mechanism)]
        if m1s:
            groups.append((p1, purview & ~p1, m1s))
    return groups


def phi_min(reps: dict, direction: str, purview: int, mechanism: int, d: int):
    """Return ``(phi, Pairing)`` for one purview/mechanism pair."""
    joint = reps[(direction, purview, mechanism)]
    prods, index = [], []
    for p1, p2, m1s in _pairing_groups(purview, mechanism):
        sa, sb = sites_of(p1), sites_of(p2)
        a = np.stack([reps[(direction, p1, m1)] for m1 in m1s])
        b = np.stack([reps[(direction, p2, mechanism & ~m1)] for m1 in m1s])
        prods.append(kron_sorted_batch(a, sa, b, sb, d))
        index.extend((p1, m1) for m1 in m1s)
    diffs = joint[None, :, :] - np.concatenate(prods)
    w = np.linalg.eigvalsh(diffs)
    dists = 0.5 * np.abs(w).sum(axis=1)
    k = int(np.argmin(dists))
    p1, m1 = index[k]
    return float(dists[k]), Pairing(p1, m1, purview & ~p1, mechanism & ~m1)


def phi_mechanism(ch, psi, direction, purview, mechanism, table=None) -> MechanismPhi:
    """Integrated information of ``M`` over ``P`` in one direction."""
    if purview == 0 or mechanism == 0:
        raise ValueError("purview and mechanism must be non-empty")
    direction = _direction(direction)
    table = table or RepertoireTable(ch, psi)
    needed = {}
    for p in submasks(purview):
        for m in submasks(mechanism):
            needed[(direction, p, m)] = table.get(direction, p, m)
    value, pairing = phi_min(needed, direction, purview, mechanism, ch.local_dim)
    return MechanismPhi(direction, purview, mechanism, value, pairing)


_WORKER_REPS = None


def _init_worker(reps):
    global _WORKER_REPS
    _WORKER_REPS = reps


def _phi_rows(args):
    mechanisms, n, d = args
    return _phi_rows_local(_WORKER_REPS, mechanisms, n, d)


def _phi_rows_local(reps, mechanisms, n, d, directions=DIRECTIONS):
    size = 1 << n
    out = []
    for m in mechanisms:
        for x in directions:
            col = np.zeros(size)
            arg = {}
            for p in range(1, size):
                col[p], arg[p] = phi_min(reps, x, p, m, d)
            out.append((x, m, col, arg))
    return out


def compute_phi_table(reps: dict, n_sites: int, local_dim: int, workers: int = 1,
                      mechanisms=None) -> PhiTable:
    """Fill ``phi^(x)(P|M)`` for all non-empty purviews and the given
    mechanisms (default: all non-empty). Results do not depend on
    ``workers``."""
    size = 1 << n_sites
    mechanisms = list(range(1, size)) if mechanisms is None else list(mechanisms)
    values = {x: np.zeros((size, size)) for x in DIRECTIONS}
    argmins = {x: {} for x in DIRECTIONS}
    if workers > 1 and len(mechanisms) > 1:
        chunks = [mechanisms[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(reps,)) as pool:
            results = [r for part in pool.map(_phi_rows, [(c, n_sites, local_dim) for c in chunks])
                       for r in part]
    else:
        results = _phi_rows_local(reps, mechanisms, n_sites, local_dim)
    for x, m, col, arg in results:
        values[x][:, m] = col
        for p, pairing in arg.items():
            argmins[x][(p, m)] = pairing
    return PhiTable(n_sites, local_dim, values, argmins)


# ---------------------------------------------------------------------------
# core purviews and concepts
# ---------------------------------------------------------------------------

def select_core(phis: dict):
    """Pick the core purview from ``{P: phi}``.

    Among purviews within ``EPS_PHI`` of the maximum the smallest one wins,
    then the smallest mask. Returns ``(P, phi)``.
    """
    best = max(phis.values())
    cands = [p for p, v in phis.items() if v >= best - EPS_PHI]
    p = min(cands, key=lambda q: (popcount(q), q))
    return p, phis[p]


def core_purview(ch, psi, direction, mechanism, table=None, phi_table=None):
    """``(P*, phi^(x)(M))`` maximizing ``phi^(x)(P|M)`` over non-empty ``P``."""
    if mechanism == 0:
        raise ValueError("mechanism must be non-empty")
    direction = _direction(direction)
    n = ch.n_sites
    if phi_table is None:
        table = table or RepertoireTable(ch, psi)
        reps = table.materialize()
        phi_table = compute_phi_table(reps, n, ch.local_dim, mechanisms=[mechanism])
    col = phi_table.values[direction][:, mechanism]
    return select_core({p: float(col[p]) for p in range(1, 1 << n)})


def extract_concepts(reps: dict, phi_table: PhiTable, purviews_for=None) -> dict:
    """Concepts from a filled phi table.

    ``purviews_for(M)`` restricts the candidate purviews (default: every
    non-empty subset); mechanisms for which it returns nothing are skipped.
    """
    n = phi_table.n_sites
    size = 1 << n
    out = {}
    for m in range(1, size):
        cands = range(1, size) if purviews_for is None else purviews_for(m)
        cands = list(cands)
        if not cands:
            continue
        cores = {}
        for x in DIRECTIONS:
            col = phi_table.values[x][:, m]
            cores[x] = select_core({p: float(col[p]) for p in cands})
        (pe, fe), (pc, fc) = cores[EFFECT], cores[CAUSE]
        if min(fe, fc) > EPS_PHI:
            out[m] = Concept(m, pe, pc, fe, fc, reps[(EFFECT, pe, m)], reps[(CAUSE, pc, m)])
    return out


def conceptual_structure(ch, psi, workers: int = 1, provenance: str = "") -> ConceptualStructure:
    """All concepts of (channel, state)."""
    reps = RepertoireTable(ch, psi).materialize()
    table = compute_phi_table(reps, ch.n_sites, ch.local_dim, workers=workers)
    concepts = extract_concepts(reps, table)
    return ConceptualStructure(ch.n_sites, ch.local_dim, concepts,
                               provenance or ch.descriptor, reps, table)


# ---------------------------------------------------------------------------
# distances between conceptual structures
# ---------------------------------------------------------------------------

def _padded(rep, core, support, d):
    """``rep`` (on ``core``) tensor ``1/d`` over ``support - core``."""
    rest = support & ~core
    if not rest:
        return rep
    dr = d ** popcount(rest)
    return kron_sorted(rep, sites_of(core), np.eye(dr) / dr, sites_of(rest), d)


def block_distance(c1: Concept, c2: Concept, direction: str, d: int) -> float:
    """``|| phi1 rho1(M) - phi2 rho2(M) ||_1`` for one mechanism/direction."""
    if c1 is None and c2 is None:
        return 0.0
    if c2 is None:
        return c1.phi
    if c1 is None:
        return c2.phi
    a, b = c1.core(direction), c2.core(direction)
    support = a | b
    if not support:
        return abs(c1.phi - c2.phi)
    x = c1.phi * _padded(c1.rep(direction), a, support, d) - c2.phi * _padded(c2.rep(direction), b, support, d)
    return float(np.sum(np.abs(np.linalg.eigvalsh(x))))


def cs_distance(c1: ConceptualStructure, c2: ConceptualStructure) -> float:
    """``1/2 ||C1 - C2||_1`` evaluated block by block."""
    if (c1.n_sites, c1.local_dim) != (c2.n_sites, c2.local_dim):
        raise ValueError("conceptual structures belong to different networks")
    total = 0.0
    for m in sorted(set(c1.concepts) | set(c2.concepts)):
        a, b = c1.concepts.get(m), c2.concepts.get(m)
        for x in DIRECTIONS:
            total += block_distance(a, b, x, c1.local_dim)
    return 0.25 * total


def cs_operator(cs: ConceptualStructure) -> np.ndarray:
    """Dense CS operator on ``(C^2)^n x C^2 x H`` (debug; small networks).

    The register basis is ``|M, alpha>`` with ``M`` the mask and ``alpha``
    0 for effect, 1 for cause.
    """
    n, d = cs.n_sites, cs.local_dim
    if n > 3:
        raise ValueError("cs_operator is limited to n_sites <= 3")
    dim = d ** n
    full = (1 << n) - 1
    out = np.zeros((2 ** n * 2 * dim, 2 ** n * 2 * dim), dtype=complex)
    for m, c in cs.concepts.items():
        for a, x in enumerate(DIRECTIONS):
            reg = 2 * m + a
            blk = _padded(c.rep(x), c.core(x), full, d)
            out[reg * dim:(reg + 1) * dim, reg * dim:(reg + 1) * dim] = 0.5 * c.phi * blk
    return out
