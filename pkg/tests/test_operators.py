import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_density
from oracle import ptrace_keep, tensor_on
from qiit.channels import swap_unitary
from qiit.operators import (SupportError, SupportedOperator, herm_expm, identity, kron,
                            maximally_mixed, partial_trace, purity, scalar, trace_distance,
                            trace_norm)

KET0 = np.diag([1, 0]).astype(complex)
KET1 = np.diag([0, 1]).astype(complex)


def op(support, m):
    return SupportedOperator(tuple(support), m)


def test_kron_identities():
    out = kron(identity([0]), identity([1]))
    assert out.support == (0, 1)
    assert np.allclose(out.matrix, np.eye(4))


def test_kron_sorts_sites():
    out = kron(op([1], KET1), op([0], KET0))
    assert out.support == (0, 1)
    assert np.allclose(out.matrix, np.kron(KET0, KET1))


def test_kron_noised_state():
    psi = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex)
    out = kron(op([0], psi), maximally_mixed([1]))
    assert np.allclose(out.matrix, np.kron(psi, np.eye(2) / 2))


def test_kron_collision():
    with pytest.raises(SupportError, match="support collision"):
        kron(identity([0, 1]), identity([1]))


def test_kron_with_scalar():
    a = op([2], KET1)
    out = kron(scalar(0.5), a)
    assert out.support == (2,)
    assert np.allclose(out.matrix, 0.5 * KET1)


def test_kron_interleaved_matches_oracle(rng):
    a = random_density(4, rng)
    b = random_density(4, rng)
    out = kron(op([0, 2], a), op([1, 3], b))
    assert np.allclose(out.matrix, tensor_on(a, [0, 2], b, [1, 3], 2))


def test_support_validation():
    with pytest.raises(SupportError):
        op([1, 0], np.eye(4))
    with pytest.raises(SupportError):
        op([0], np.eye(4))


def test_partial_trace_examples(rng):
    psi, sigma = random_density(2, rng), random_density(2, rng)
    out = partial_trace(kron(op([0], psi), op([1], sigma)), [0])
    assert np.allclose(out.matrix, psi)
    bell = np.zeros((4, 4))
    bell[np.ix_([0, 3], [0, 3])] = 0.5
    assert np.allclose(partial_trace(op([0, 1], bell), [0]).matrix, np.eye(2) / 2)
    x = op([0, 1], random_density(4, rng))
    assert np.allclose(partial_trace(x, [0, 1]).matrix, x.matrix)


def test_partial_trace_mask_and_errors(rng):
    x = op([0, 1, 2], random_density(8, rng))
    assert partial_trace(x, 0b101).support == (0, 2)
    with pytest.raises(SupportError):
        partial_trace(op([0, 1], np.eye(4)), [2])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.lists(st.booleans(), min_size=3, max_size=3))
def test_partial_trace_preserves_trace_and_matches_oracle(seed, keep_bits):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    h = a + a.conj().T
    keep = [i for i, b in enumerate(keep_bits) if b]
    out = partial_trace(op([0, 1, 2], h), keep)
    assert abs(np.trace(out.matrix) - np.trace(h)) < 1e-12
    assert np.allclose(out.matrix, ptrace_keep(h, 3, 2, keep))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_kron_then_trace_returns_factor(seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    b = random_density(4, rng) * 3.0
    out = partial_trace(kron(op([1], a), op([0, 2], b)), [1])
    assert np.max(np.abs(out.matrix - a * np.trace(b))) < 1e-12


def test_trace_norm_values(rng):
    rho = op([0, 1], random_density(4, rng))
    assert trace_norm(rho) == pytest.approx(1.0)
    pure = np.array([[1, 0], [0, 0]], dtype=complex)
    assert trace_norm(op([0], pure - np.eye(2) / 2)) == pytest.approx(1.0)
    pp = np.kron(pure, pure)
    assert trace_norm(op([0, 1], pp - np.eye(4) / 4)) == pytest.approx(1.5)


def test_trace_norm_rejects_non_hermitian():
    with pytest.raises(ValueError, match="Hermitian"):
        trace_norm(op([0], np.array([[0, 1], [0, 0]], dtype=complex)))


def test_trace_distance_examples(rng):
    rho = op([0], random_density(2, rng))
    assert trace_distance(rho, rho) == pytest.approx(0.0, abs=1e-15)
    pure = op([0], np.diag([1, 0]).astype(complex))
    assert trace_distance(pure, maximally_mixed([0])) == pytest.approx(0.5)
    pp = op([0, 1], np.diag([1, 0, 0, 0]).astype(complex))
    assert trace_distance(pp, maximally_mixed([0, 1])) == pytest.approx(0.75)
    with pytest.raises(SupportError, match="support mismatch"):
        trace_distance(pure, maximally_mixed([1]))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_trace_distance_metric_and_contraction(seed):
    rng = np.random.default_rng(seed)
    r, s, t = (op([0, 1, 2], random_density(8, rng, rank=rng.integers(1, 9))) for _ in range(3))
    drs = trace_distance(r, s)
    assert -1e-12 <= drs <= 1 + 1e-12
    assert drs == pytest.approx(trace_distance(s, r), abs=1e-12)
    assert drs <= trace_distance(r, t) + trace_distance(t, s) + 1e-12
    keep = [0, 2]
    assert trace_distance(partial_trace(r, keep), partial_trace(s, keep)) <= drs + 1e-12


def test_purity_values():
    pure = op([0], np.diag([1, 0]).astype(complex))
    assert purity(pure) == pytest.approx(1.0)
    assert purity(maximally_mixed([0, 1, 2])) == pytest.approx(1 / 8)
    t = 0.4
    c2, s2 = np.cos(t) ** 2, np.sin(t) ** 2
    rho = c2 * pure.matrix + s2 * (np.eye(2) - pure.matrix)
    assert purity(op([0], rho)) == pytest.approx(c2 ** 2 + s2 ** 2)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_purity_one_iff_pure(seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    v /= np.linalg.norm(v)
    p = op([0, 1], np.outer(v, v.conj()))
    assert purity(p) == pytest.approx(1.0)
    assert np.linalg.eigvalsh(p.matrix).max() == pytest.approx(1.0)
    mixed = op([0, 1], random_density(4, rng))
    assert purity(mixed) < 1 - 1e-6


def test_herm_expm_examples():
    assert np.allclose(herm_expm(np.diag([1.0, -1.0]), 0.0), np.eye(2))
    s = swap_unitary(2)
    assert np.allclose(herm_expm(s, np.pi / 2), 1j * s)
    t = 0.3
    assert np.allclose(herm_expm(np.diag([1.0, -1.0]), t), np.diag([np.exp(1j * t), np.exp(-1j * t)]))
    with pytest.raises(ValueError):
        herm_expm(np.array([[0, 1], [0, 0]], dtype=complex), 1.0)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.floats(-10, 10))
def test_herm_expm_unitary(seed, angle):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    u = herm_expm(a + a.conj().T, angle)
    assert np.max(np.abs(u @ u.conj().T - np.eye(8))) < 1e-10
