"""Global integrated information: minimum-information-partition search,
restricted families, bounds, complexes and size-scaling fits."""

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .channels import partitioned_channel, reduced_channel
from .concepts import (EPS_PHI, ConceptualStructure, compute_phi_table, conceptual_structure,
                       cs_distance, extract_concepts)
from .network import Bipartition, boundary_size, enumerate_bipartitions
from .operators import SupportedOperator, kron_sorted, ptrace
from .repertoires import DIRECTIONS
from .subsets import popcount, sites_of, submasks

log = logging.getLogger(__name__)


class PhiUndefined(ValueError):
    pass


@dataclass(eq=False)
class PhiResult:
    phi: float
    mip: Bipartition
    per_partition: list
    cs_full: ConceptualStructure
    elapsed: float = 0.0
    method: str = "lemma"

    @property
    def disintegrated(self) -> bool:
        return self.phi == 0.0


# ---------------------------------------------------------------------------
# partitioned conceptual structures
# ---------------------------------------------------------------------------

def factorized_repertoires(cs: ConceptualStructure, bp: Bipartition) -> dict:
    """Repertoires of the cut map: ``rho(P1|M1) x rho(P2|M2)`` with
    ``Xi = X & side_i``, built from the intact channel's repertoires."""
    reps, d = cs.reps, cs.local_dim
    size = 1 << cs.n_sites
    out = {}
    for x in DIRECTIONS:
        for m in range(size):
            m1, m2 = m & bp.part1, m & bp.part2
            for p in range(size):
                p1, p2 = p & bp.part1, p & bp.part2
                out[(x, p, m)] = kron_sorted(reps[(x, p1, m1)], sites_of(p1),
                                             reps[(x, p2, m2)], sites_of(p2), d)
    return out


def partitioned_cs_via_lemma(cs: ConceptualStructure, bp: Bipartition,
                             exhaustive: bool = False) -> ConceptualStructure:
    """Conceptual structure of the cut map from the intact repertoires.

    With factorized repertoires, ``phi(P|M)`` of the cut map equals the
    intact value when ``P | M`` lies on one side (every pairing factor is
    unchanged) and is exactly zero otherwise (the factorized repertoire is
    itself one of the pairing products). The default path reads those
    values off the intact phi table; ``exhaustive=True`` instead rebuilds
    every repertoire and reruns the full phi extraction.
    """
    if cs.reps is None or cs.phi_table is None:
        raise ValueError("conceptual structure was built without its repertoire table")
    if bp.n_sites != cs.n_sites:
        raise ValueError("bipartition belongs to another network")
    name = f"{cs.provenance}|lemma{bp}"
    if exhaustive:
        reps = factorized_repertoires(cs, bp)
        table = compute_phi_table(reps, cs.n_sites, cs.local_dim)
        return ConceptualStructure(cs.n_sites, cs.local_dim, extract_concepts(reps, table),
                                   name, reps, table)

    def same_side(m):
        side = bp.side_of(m)
        if side is None:
            return []
        return [p for p in submasks(bp.parts[side - 1]) if p]

    concepts = extract_concepts(cs.reps, cs.phi_table, purviews_for=same_side)
    return ConceptualStructure(cs.n_sites, cs.local_dim, concepts, name)


def partitioned_cs_brute(ch, psi, bp: Bipartition, workers: int = 1) -> ConceptualStructure:
    """Conceptual structure of ``U_1 x U_2`` computed from scratch."""
    return conceptual_structure(partitioned_channel(ch, bp), psi, workers=workers)


# ---------------------------------------------------------------------------
# Phi
# ---------------------------------------------------------------------------

def _mip_key(item):
    bp, dist = item
    return (bp.smaller_size, bp.part1)


def phi(ch, psi, k: int = None, method: str = "lemma", cross_check: bool = False,
        workers: int = 1, cs: ConceptualStructure = None) -> PhiResult:
    """Integrated information by exhaustive bipartition search.

    Args:
        ch: network dynamics.
        psi: initial network state (array or SupportedOperator).
        k: when given, only cuts whose smaller side has at most ``k`` sites
            are searched (the restricted family ``Phi^(k)``).
        method: ``"lemma"`` builds the cut structures from the intact
            repertoires; ``"brute"`` recomputes them from the cut channels.
        cross_check: also run the brute-force route and raise if any
            partition disagrees by more than ``EPS_PHI``.
        workers: process count for the phi-table build.
        cs: a precomputed conceptual structure of ``(ch, psi)``.
    """
    n = ch.n_sites
    if n < 2:
        raise PhiUndefined("Phi undefined: no bipartitions")
    if method not in ("lemma", "brute"):
        raise ValueError(f"unknown method {method!r}")
    t0 = time.perf_counter()
    cs = cs or conceptual_structure(ch, psi, workers=workers)
    per = []
    for bp in enumerate_bipartitions(n):
        if k is not None and bp.smaller_size > k:
            continue
        if method == "lemma":
            cut = partitioned_cs_via_lemma(cs, bp)
        else:
            cut = partitioned_cs_brute(ch, psi, bp, workers)
        dist = cs_distance(cs, cut)
        if cross_check:
            other = (partitioned_cs_brute(ch, psi, bp, workers) if method == "lemma"
                     else partitioned_cs_via_lemma(cs, bp))
            delta = cs_distance(cut, other)
            if delta > EPS_PHI:
                raise RuntimeError(f"lemma/brute mismatch {delta:.3g} on cut {bp}")
        per.append((bp, dist))
    if not per:
        raise PhiUndefined(f"no bipartition with smaller side <= {k}")
    best = min(d for _, d in per)
    ties = [it for it in per if it[1] <= best + EPS_PHI]
    mip = min(ties, key=_mip_key)[0]
    value = 0.0 if best <= EPS_PHI else best
    return PhiResult(value, mip, per, cs, time.perf_counter() - t0, method)


def phi_k(ch, psi, k: int, **kw) -> PhiResult:
    """``Phi^(k)``: the search restricted to cuts with a side of size <= k."""
    if not 1 <= k <= ch.n_sites:
        raise ValueError("k must lie in [1, n_sites]")
    return phi(ch, psi, k=k, **kw)


@dataclass(frozen=True)
class PhiBounds:
    upper: float
    lower: float
    mechanism_lower: float
    boundary_size: int
    phi0: float

    def holds(self, value, slack=EPS_PHI) -> bool:
        return self.lower - slack <= value <= self.upper + slack


def dis_integrated_mechanisms(cs: ConceptualStructure, bp: Bipartition):
    """Concepts for which ``M | P*`` straddles the cut in some direction."""
    out = []
    for m, c in cs.concepts.items():
        if any(bp.straddles(m | c.core(x)) for x in DIRECTIONS):
            out.append(m)
    return sorted(out)


def phi_bounds(result: PhiResult, cs: ConceptualStructure = None) -> PhiBounds:
    """Upper ``Tr C = sum_M phi(M)`` and the boundary lower bounds.

    ``lower`` sums ``phi(M)/2`` over concepts whose mechanism together with
    a core purview straddles the MIP; ``mechanism_lower`` only counts
    mechanisms that straddle the cut themselves.
    """
    cs, bp = cs or result.cs_full, result.mip
    upper = cs.total_phi()
    lower = 0.5 * sum(cs.concepts[m].phi for m in dis_integrated_mechanisms(cs, bp))
    straddling = [m for m in cs.concepts if bp.straddles(m)]
    mech_lower = 0.5 * sum(cs.concepts[m].phi for m in straddling)
    all_boundary = [m for m in range(1 << cs.n_sites) if bp.straddles(m)]
    phi0 = min((cs.concepts[m].phi if m in cs.concepts else 0.0) for m in all_boundary)
    return PhiBounds(upper, lower, mech_lower, boundary_size(bp), phi0)


# ---------------------------------------------------------------------------
# complexes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComplexRecord:
    subnetwork: int
    phi: float
    is_complex: bool


def reduced_state(psi, omega: int, n_sites: int, d: int) -> np.ndarray:
    m = psi.matrix if isinstance(psi, SupportedOperator) else np.asarray(psi)
    return ptrace(m, tuple(range(n_sites)), sites_of(omega), d)


def find_complexes(ch, psi, workers: int = 1):
    """Phi of every reduced subnetwork with at least two sites.

    A subnetwork is marked as a complex when its Phi is positive and no
    overlapping evaluated subnetwork has a larger Phi.
    """
    n, d = ch.n_sites, ch.local_dim
    values = {}
    for omega in range(1, 1 << n):
        if popcount(omega) < 2:
            continue
        sub = reduced_channel(ch, omega)
        values[omega] = phi(sub, reduced_state(psi, omega, n, d), workers=workers).phi
    out = []
    for omega, v in sorted(values.items()):
        ok = v > EPS_PHI and all(v >= w - EPS_PHI for o, w in values.items() if o & omega)
        out.append(ComplexRecord(omega, v, ok))
    return out


# ---------------------------------------------------------------------------
# scaling with network size
# ---------------------------------------------------------------------------

PRESCRIPTIONS = ("fixed-t", "constant-action", "argmax-t")


@dataclass(eq=False)
class ScalingFit:
    sizes: list
    times: list
    phis: list
    prescription: str
    against: str
    slope: float
    intercept: float
    residuals: list
    excluded: list = field(default_factory=list)


def argmax_t(phi_of_t, lo=0.0, hi=np.pi / 2, grid=64, rounds=3):
    """Maximize a piecewise-smooth ``phi_of_t`` on ``[lo, hi]``: a uniform
    grid followed by ``rounds`` of local trisection around the best point."""
    ts = np.linspace(lo, hi, grid)
    vals = [phi_of_t(t) for t in ts]
    i = int(np.argmax(vals))
    best_t, best_v = float(ts[i]), float(vals[i])
    width = (hi - lo) / (grid - 1)
    for _ in range(rounds):
        a, b = max(lo, best_t - width), min(hi, best_t + width)
        for t in np.linspace(a, b, 4)[1:3]:
            v = phi_of_t(float(t))
            if v > best_v:
                best_t, best_v = float(t), float(v)
        width /= 3
    return best_t, best_v


def scaling_fit(model_at, sizes, prescription, t=None, action=None, against="size",
                workers: int = 1) -> ScalingFit:
    """Fit ``log2 Phi`` against ``|Lambda|`` (``against="size"``) or
    ``log2 |Lambda|`` (``against="log-size"``).

    Args:
        model_at: ``model_at(n, t) -> (channel, psi, generator_norm)``.
        sizes: network sizes, at least three.
        prescription: ``fixed-t`` uses ``t``; ``constant-action`` uses
            ``t = action / ||H||``; ``argmax-t`` maximizes Phi over ``t``.
    """
    sizes = list(sizes)
    if len(sizes) < 3:
        raise ValueError("fit requires >= 3 sizes")
    if prescription not in PRESCRIPTIONS:
        raise ValueError(f"unknown prescription {prescription!r}")
    times, phis, excluded = [], [], []
    for n in sizes:
        if prescription == "fixed-t":
            tn = float(t)
            value = phi(*model_at(n, tn)[:2], workers=workers).phi
        elif prescription == "constant-action":
            norm = model_at(n, 0.0)[2]
            tn = float(action) / norm
            value = phi(*model_at(n, tn)[:2], workers=workers).phi
        else:
            tn, value = argmax_t(lambda s: phi(*model_at(n, s)[:2], workers=workers).phi)
        log.info("size %d: t=%.6g Phi=%.12g", n, tn, value)
        times.append(tn)
        phis.append(value)
        if value <= EPS_PHI:
            excluded.append(n)
    xs = [n for n, v in zip(sizes, phis) if v > EPS_PHI]
    ys = [np.log2(v) for v in phis if v > EPS_PHI]
    if len(xs) < 2:
        raise ValueError("fewer than two sizes with Phi > 0")
    xv = np.log2(xs) if against == "log-size" else np.asarray(xs, dtype=float)
    slope, intercept = np.polyfit(xv, ys, 1)
    resid = list(np.asarray(ys) - (slope * xv + intercept))
    return ScalingFit(sizes, times, phis, prescription, against, float(slope), float(intercept),
                      [float(r) for r in resid], excluded)
