import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracle import pairings as oracle_pairings
from qiit.network import (Bipartition, Network, StateError, StateSpec, bell_state, boundary,
                          boundary_size, build_state, enumerate_bipartitions, enumerate_pairings,
                          enumerate_subsets, named_ket, noising, product_bloch_vectors,
                          ring_geometry, subset_distance)
from qiit.operators import SupportedOperator
from qiit.subsets import (complement, format_mask, lowest_site, mask_of, popcount, sites_of,
                          submasks)


def test_mask_helpers():
    assert sites_of(0b1011) == (0, 1, 3)
    assert mask_of([0, 1, 3]) == 0b1011
    assert popcount(0b1011) == 3
    assert complement(0b011, 3) == 0b100
    assert lowest_site(0b1100) == 2
    assert submasks(0b101) == [0, 1, 4, 5]
    assert format_mask(0b101) == "{0,2}"
    with pytest.raises(ValueError):
        lowest_site(0)


def test_network_validation():
    spec = StateSpec.uniform(named_ket("0"), 2)
    with pytest.raises(ValueError):
        Network(0, 2, spec)
    with pytest.raises(ValueError):
        Network(2, 1, spec)
    with pytest.raises(ValueError):
        Network(2, 2, spec, geometry=np.ones((3, 3)))
    net = Network(2, 2, spec)
    assert net.dim == 4 and net.full == 3


def test_build_state_product_and_errors():
    net = Network(2, 2, StateSpec.product([named_ket("+"), named_ket("1")]))
    psi = build_state(net)
    v = np.kron(np.ones(2) / np.sqrt(2), [0, 1])
    assert np.allclose(psi.matrix, np.outer(v, v))
    with pytest.raises(StateError, match="normalized"):
        build_state(Network(1, 2, StateSpec.product([np.array([1.0, 1.0])])))
    with pytest.raises(StateError):
        build_state(Network(2, 2, StateSpec.product([named_ket("0")])))
    with pytest.raises(StateError):
        build_state(Network(1, 2, StateSpec.explicit(np.diag([1.5, -0.5]))))


def test_bloch_state_round_trip():
    vecs = [np.array([1.0, 0, 0]), np.array([0, 0, -1.0])]
    net = Network(2, 2, StateSpec.from_bloch(vecs))
    psi = build_state(net).matrix
    target = np.kron(np.ones(2) / np.sqrt(2), [0, 1])
    assert np.allclose(psi, np.outer(target, target.conj()))
    got = product_bloch_vectors(net)
    assert np.allclose(got[0], vecs[0]) and np.allclose(got[1], vecs[1])


def test_qutrit_plus_and_bell():
    assert np.allclose(named_ket("+", 3), np.ones(3) / np.sqrt(3))
    with pytest.raises(StateError):
        named_ket("3", 3)
    b = bell_state()
    assert np.isclose(np.trace(b), 1) and np.allclose(b @ b, b)


def test_noising():
    rho = SupportedOperator((0, 1), bell_state())
    out = noising(rho, 0b10)
    assert np.allclose(out.matrix, np.eye(4) / 4)
    prod = np.kron(np.diag([1, 0]), np.diag([0, 1])).astype(complex)
    out = noising(SupportedOperator((0, 1), prod), 0b01)
    assert np.allclose(out.matrix, np.kron(np.eye(2) / 2, np.diag([0, 1])))


def test_subsets_enumeration():
    assert list(enumerate_subsets(3)) == list(range(8))


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_bipartition_count_and_canonical(n):
    bps = list(enumerate_bipartitions(n))
    assert len(bps) == 2 ** (n - 1) - 1
    assert all(bp.part1 & 1 for bp in bps)
    assert len({bp.part1 for bp in bps}) == len(bps)


def test_bipartition_canonicalizes_and_sides():
    bp = Bipartition(0b110, 3)
    assert bp.part1 == 0b001 and bp.part2 == 0b110
    assert bp.side_of(0b001) == 1 and bp.side_of(0b100) == 2 and bp.side_of(0b011) is None
    assert bp.straddles(0b101) and not bp.straddles(0b110)
    assert bp.smaller_size == 1
    assert str(bp) == "{0}|{1,2}"
    with pytest.raises(ValueError):
        Bipartition(0b111, 3)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_boundary_size_formula(n):
    for bp in enumerate_bipartitions(n):
        assert len(boundary(bp)) == boundary_size(bp)
        n1 = popcount(bp.part1)
        assert boundary_size(bp) == 2 ** n - 2 ** n1 - 2 ** (n - n1) + 1
        assert boundary_size(bp) >= 2 ** (n - 1) - 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 15), st.integers(0, 15))
def test_pairing_count_and_oracle(p, m):
    if p == 0 and m == 0:
        assert list(enumerate_pairings(p, m)) == []
        return
    got = list(enumerate_pairings(p, m))
    assert len(got) == 2 ** (popcount(p) + popcount(m) - 1) - 1
    keys = {frozenset([(pp.p1, pp.m1), (pp.p2, pp.m2)]) for pp in got}
    assert len(keys) == len(got)
    ref = {frozenset([(mask_of(a), mask_of(b)), (mask_of(c), mask_of(dd))])
           for a, b, c, dd in oracle_pairings(sites_of(p), sites_of(m))}
    assert keys == ref
    for pp in got:
        assert pp.p1 | pp.p2 == p and pp.m1 | pp.m2 == m
        assert not (pp.p2 == 0 and pp.m2 == 0)


def test_pairing_examples():
    assert len(list(enumerate_pairings(0b1, 0b1))) == 1
    assert len(list(enumerate_pairings(0b11, 0b11))) == 7


def test_geometry_distance():
    net = Network(6, 2, StateSpec.uniform(named_ket("0"), 6), ring_geometry(6))
    assert subset_distance(0b1, 0b1000, net) == 3
    assert subset_distance(0b1, 0b100000, net) == 1
    with pytest.raises(ValueError):
        subset_distance(0, 1, net)
