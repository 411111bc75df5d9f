import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_product_psi
from oracle import liouville, repertoire as oracle_repertoire, tensor_on
from qiit.channels import (identity_channel, sample_haar, unitary_channel,
                           evolution_unitary, xx_ring)
from qiit.models import cnot_model, product_psi, swap_model
from qiit.network import KET0, Network, StateSpec, bloch_to_ket, named_ket, ring_geometry
from qiit.operators import purity
from qiit.repertoires import (RepertoireTable, average_xi, bloch_image, cause_effect_info,
                              correlator_table, decay_profile, haar_average_purity,
                              haar_mc_purity, lr_decay_scan, purity_via_correlators, repertoire,
                              xi_table, xi_upper_bound)
from qiit.subsets import sites_of

PSI = np.diag([1, 0]).astype(complex)
MIX = np.eye(2) / 2


def test_swap_repertoires():
    ch, psi, _ = swap_model()
    t = RepertoireTable(ch, psi)
    for x in ("effect", "cause"):
        assert np.allclose(t.get(x, 0b01, 0b01), MIX)
        assert np.allclose(t.get(x, 0b10, 0b01), PSI)
        assert np.allclose(t.get(x, 0b11, 0b01), np.kron(MIX, PSI))
        assert np.allclose(t.get(x, 0b10, 0b10), MIX)
        assert np.allclose(t.get(x, 0b01, 0b10), PSI)
        assert np.allclose(t.get(x, 0b11, 0b10), np.kron(PSI, MIX))
        assert np.allclose(t.get(x, 0b01, 0b11), PSI)
        assert np.allclose(t.get(x, 0b11, 0b11), np.kron(PSI, PSI))


def test_empty_sets():
    ch, psi, _ = swap_model()
    t = RepertoireTable(ch, psi)
    assert np.allclose(t.get("effect", 0, 0b11), [[1]])
    assert np.array_equal(t.get("cause", 0b11, 0), np.eye(4) / 4)
    assert cause_effect_info(ch, psi, "e", 0, 0b1) == 0.0


def test_repertoire_wrapper_and_direction_errors():
    ch, psi, _ = swap_model()
    r = repertoire(ch, psi, "c", 0b10, 0b01)
    assert r.state.support == (1,) and r.direction == "cause"
    with pytest.raises(ValueError):
        repertoire(ch, psi, "sideways", 1, 1)


def test_swap_xi():
    ch, psi, _ = swap_model()
    for x in ("e", "c"):
        assert cause_effect_info(ch, psi, x, 0b01, 0b01) == pytest.approx(0.0, abs=1e-15)
        assert cause_effect_info(ch, psi, x, 0b10, 0b01) == pytest.approx(0.5)
        assert cause_effect_info(ch, psi, x, 0b01, 0b10) == pytest.approx(0.5)
        assert cause_effect_info(ch, psi, x, 0b01, 0b11) == pytest.approx(0.5)
        assert cause_effect_info(ch, psi, x, 0b11, 0b11) == pytest.approx(0.75)


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_average_xi_identity_closed_form(n, d):
    ket = np.zeros(d, dtype=complex)
    ket[0] = 1
    got = average_xi(identity_channel(n, d), product_psi(ket, n))
    assert got == pytest.approx(1 - ((3 * d + 1) / (4 * d)) ** n, abs=1e-12)


def test_average_xi_factorized_unitary_equals_identity():
    u = np.kron(sample_haar(2, 1), sample_haar(2, 2))
    psi = product_psi(KET0, 2)
    assert average_xi(unitary_channel(u, 2, 2), psi) == pytest.approx(15 / 64)


def test_average_xi_swap_and_cnot():
    assert average_xi(*swap_model()[:2]) == pytest.approx(15 / 64)
    # hand count for cNOT on |11>: M={0} gives 1, M={1} gives 1/2, M=L gives 7/4
    ch, psi, _ = cnot_model()
    for x in ("effect", "cause"):
        assert average_xi(ch, psi, x) == pytest.approx(13 / 64, abs=1e-12)


def test_identity_repertoire_structure():
    # identity on a pure product state: rho(P|M) = Psi_{P&M} x 1/d on P-M
    rng = np.random.default_rng(4)
    kets = []
    for _ in range(3):
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        kets.append(v / np.linalg.norm(v))
    psi = np.ones(1)
    for k in kets:
        psi = np.kron(psi, k)
    psi = np.outer(psi, psi.conj())
    t = RepertoireTable(identity_channel(3), psi)
    for m in range(8):
        for p in range(1, 8):
            inner = sites_of(p & m)
            outer = sites_of(p & ~m)
            a = np.ones((1, 1), dtype=complex)
            for s in inner:
                a = np.kron(a, np.outer(kets[s], kets[s].conj()))
            b = np.eye(2 ** len(outer)) / 2 ** len(outer)
            want = tensor_on(a, list(inner), b, list(outer), 2)
            assert np.allclose(t.get("effect", p, m), want)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_repertoires_match_oracle(seed):
    rng = np.random.default_rng(seed)
    u = sample_haar(8, seed)
    psi = random_product_psi(3, rng)
    t = RepertoireTable(unitary_channel(u, 3, 2), psi)
    sup = liouville(u)
    for x in ("effect", "cause"):
        p, m = int(rng.integers(1, 8)), int(rng.integers(0, 8))
        got = t.get(x, p, m)
        want = oracle_repertoire(sup, psi, x, sites_of(p), sites_of(m), 3, 2)
        assert np.allclose(got, want, atol=1e-12)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_correlator_purity_matches_direct(seed):
    rng = np.random.default_rng(seed)
    vecs = [v / np.linalg.norm(v) for v in rng.normal(size=(3, 3))]
    psi = np.ones(1)
    for v in vecs:
        psi = np.kron(psi, bloch_to_ket(v))
    psi = np.outer(psi, psi.conj())
    ch = unitary_channel(sample_haar(8, seed), 3, 2)
    t = RepertoireTable(ch, psi)
    for x in ("effect", "cause"):
        p, m = int(rng.integers(1, 8)), int(rng.integers(1, 8))
        direct = float(np.real(np.trace(t.get(x, p, m) @ t.get(x, p, m))))
        via = purity_via_correlators(correlator_table(ch, p, m, x), vecs)
        assert abs(direct - via) < 1e-9


def test_correlator_table_identity_entry_and_qubits_only():
    ch = unitary_channel(sample_haar(4, 3), 2, 2)
    g = correlator_table(ch, 0b01, 0b10).G
    assert g[0, 0] == pytest.approx(1.0)
    with pytest.raises(ValueError, match="qubits"):
        correlator_table(identity_channel(2, 3), 1, 1)


def test_bloch_image_of_swap():
    ch, _, _ = swap_model()
    v = np.array([0.0, 0.6, 0.8])
    img = bloch_image(correlator_table(ch, 0b10, 0b01), {0: v})
    assert np.allclose(img, v)


def test_haar_average_purity_limits():
    # no mechanism: fully mixed purview on average
    assert haar_average_purity(3, 2, 1, 0) == pytest.approx(0.5)
    # full mechanism and purview: the pure state survives
    assert haar_average_purity(3, 2, 3, 3) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        haar_average_purity(2, 2, 3, 1)


def test_haar_mc_close_to_closed_form():
    vals = haar_mc_purity(3, 2, 0b011, 0b110, range(300))
    se = vals.std(ddof=1) / np.sqrt(len(vals))
    assert abs(vals.mean() - haar_average_purity(3, 2, 2, 2)) < 4 * se


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_xi_upper_bound(seed):
    rng = np.random.default_rng(seed)
    ch = unitary_channel(sample_haar(8, seed), 3, 2)
    psi = random_product_psi(3, rng)
    t = RepertoireTable(ch, psi)
    xs = xi_table(ch, psi, "effect", t)
    for m in range(1, 8):
        for p in range(1, 8):
            rho = t.get("effect", p, m)
            pur = float(np.real(np.trace(rho @ rho)))
            assert xs[p, m] <= xi_upper_bound(pur, 2, bin(p).count("1")) + 1e-9


def test_xi_upper_bound_value():
    assert xi_upper_bound(1.0, 2, 1) == pytest.approx(np.sqrt(0.5 * np.log(2)))
    assert xi_upper_bound(0.25, 2, 2) == 0.0


def test_lr_scan_ring():
    net = Network(6, 2, StateSpec.uniform(named_ket("0"), 6), ring_geometry(6))
    ch = unitary_channel(evolution_unitary(xx_ring(6), 0.2), 6, 2)
    psi = product_psi(KET0, 6)
    rows = lr_decay_scan(ch, psi, net, 0b1)
    assert [r[0] for r in rows] == sorted(r[0] for r in rows)
    prof = dict(decay_profile(rows))
    assert prof[3.0] < prof[1.0]
    with pytest.raises(ValueError):
        lr_decay_scan(ch, psi, Network(6, 2, net.state), 0b1)


def test_purity_of_swap_reps():
    ch, psi, _ = swap_model()
    t = RepertoireTable(ch, psi)
    from qiit.operators import SupportedOperator
    assert purity(SupportedOperator((0, 1), t.get("effect", 0b11, 0b01))) == pytest.approx(0.5)
