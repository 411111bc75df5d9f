import numpy as np
import pytest

from qiit.concepts import conceptual_structure
from qiit.models import (DESK_LIMIT, DeskLimitError, check_desk_limit, family, partial_swap,
                         partial_swap_jumps, partial_swap_phi_closed, permutation_model,
                         spin_model, z_model, z_model_phi_closed)
from qiit.phi import phi


def test_desk_limit():
    check_desk_limit(12, 2)
    with pytest.raises(DeskLimitError, match="force-large"):
        check_desk_limit(13, 2)
    check_desk_limit(13, 2, force=True)
    assert 2 ** 12 == DESK_LIMIT
    with pytest.raises(DeskLimitError):
        z_model(13, 0.1)


@pytest.mark.parametrize("t", [0.1, 0.5, 0.8, 1.0, 1.3])
def test_partial_swap_closed_forms(t):
    cs = conceptual_structure(*partial_swap(t)[:2])
    site, whole = partial_swap_phi_closed(t)
    assert cs.concepts[0b01].phi == pytest.approx(site, abs=1e-10)
    assert cs.concepts[0b10].phi == pytest.approx(site, abs=1e-10)
    if whole > 1e-9 and 0b11 in cs.concepts:
        assert cs.concepts[0b11].phi == pytest.approx(whole, abs=1e-10)


def test_partial_swap_endpoints():
    assert phi(*partial_swap(0.0)[:2]).phi == 0.0
    assert phi(*partial_swap(np.pi / 2)[:2]).phi == pytest.approx(0.5)


def test_partial_swap_jump_locations():
    a, b = partial_swap_jumps()
    assert np.cos(a) ** 2 == pytest.approx(2 / 3)
    assert np.cos(b) ** 2 == pytest.approx(1 / 3)


@pytest.mark.parametrize("n", [3, 4])
def test_z_model_intermediate_mechanisms(n):
    t = 0.4
    table = conceptual_structure(*z_model(n, t)[:2]).phi_table
    for m in range(1, 1 << n):
        if 2 <= bin(m).count("1") < n:
            for x in ("effect", "cause"):
                assert table.get(x, m, m) == pytest.approx(z_model_phi_closed(t), abs=1e-10)


def test_z_model_endpoints():
    for t in (0.0, np.pi / 2):
        assert phi(*z_model(3, t)[:2]).phi == pytest.approx(0.0, abs=1e-12)


def test_spin_model_norm_and_family():
    ch, psi, norm = spin_model("xx-ring", 4, 0.1)
    assert norm == pytest.approx(4 * np.sqrt(2))
    assert ch.n_sites == 4 and psi.shape == (16, 16)
    with pytest.raises(ValueError):
        spin_model("ising", 3, 0.1)
    with pytest.raises(ValueError):
        family("nope")
    assert family("xxx-full")(3, 0.2)[0].n_sites == 3


def test_permutation_model_descriptor():
    ch, _, _ = permutation_model([1, 2, 0])
    assert "perm" in ch.descriptor
