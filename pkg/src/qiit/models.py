"""Network families used by the examples, sweeps and scaling studies.

Each builder returns ``(channel, psi, generator_norm)`` so it can be passed
straight to :func:`qiit.phi.scaling_fit` as ``model_at(n, t)``.
"""

import numpy as np

from .channels import (cnot_unitary, evolution_unitary, permutation_unitary, spectral_norm,
                       swap_unitary, unitary_channel, xx_full, xx_ring, xxx_full, xxx_ring,
                       z_global)
from .network import KET0, KET1, KET_PLUS, Network, StateSpec, build_state
from .operators import herm_expm

DESK_LIMIT = 4096


class DeskLimitError(RuntimeError):
    pass


def check_desk_limit(n_sites, local_dim=2, force=False):
    dim = local_dim ** n_sites
    if dim > DESK_LIMIT and not force:
        raise DeskLimitError(f"d^n = {dim} exceeds the desk limit {DESK_LIMIT}; "
                             "pass --force-large to override")


def product_psi(ket, n_sites):
    d = len(ket)
    return build_state(Network(n_sites, d, StateSpec.uniform(ket, n_sites))).matrix


def swap_model(ket=KET0):
    s = swap_unitary(2)
    return unitary_channel(s, 2, 2, "swap"), product_psi(ket, 2), 1.0


def partial_swap(t, ket=KET0):
    """``U_t = exp(i t S)`` on two qubits with ``Psi x Psi``."""
    u = herm_expm(swap_unitary(2), t)
    return unitary_channel(u, 2, 2, f"partial-swap:t={t:.17g}"), product_psi(ket, 2), 1.0


def cnot_model(ket=KET1):
    return unitary_channel(cnot_unitary(), 2, 2, "cnot"), product_psi(ket, 2), 1.0


def permutation_model(perm, local_dim=2, ket=None):
    n = len(perm)
    ket = KET0 if ket is None else ket
    u = permutation_unitary(perm, local_dim)
    return unitary_channel(u, n, local_dim, f"perm:{list(perm)}"), product_psi(ket, n), 1.0


def z_model(n_sites, t, force=False):
    """``exp(i t Z)`` with ``Z`` the product of all ``sigma^z``, on ``|+>^n``."""
    check_desk_limit(n_sites, force=force)
    z = z_global(n_sites)
    u = np.diag(np.exp(1j * t * np.real(np.diag(z))))
    return unitary_channel(u, n_sites, 2, f"z-model:n={n_sites}:t={t:.17g}"), \
        product_psi(KET_PLUS, n_sites), 1.0


_SPIN = {"xx-ring": xx_ring, "xx-full": xx_full, "xxx-ring": xxx_ring, "xxx-full": xxx_full}


def spin_model(kind, n_sites, t, ket=KET0, force=False):
    """``exp(-i t H)`` for the XX/XXX ring or all-to-all Hamiltonians."""
    if kind not in _SPIN:
        raise ValueError(f"unknown spin model {kind!r}")
    check_desk_limit(n_sites, force=force)
    h = _SPIN[kind](n_sites)
    u = evolution_unitary(h, t, -1)
    return unitary_channel(u, n_sites, 2, f"{kind}:n={n_sites}:t={t:.17g}"), \
        product_psi(ket, n_sites), spectral_norm(h)


def family(name, **kw):
    """``model_at(n, t)`` callable for a named family."""
    if name == "z-model":
        return lambda n, t: z_model(n, t, **kw)
    if name in _SPIN:
        return lambda n, t: spin_model(name, n, t, **kw)
    raise ValueError(f"unknown family {name!r}")


def partial_swap_phi_closed(t):
    """Closed-form ``(phi(i), phi(Lambda))`` of the partial swap."""
    c2, s2 = np.cos(t) ** 2, np.sin(t) ** 2
    cs = c2 * s2
    inner = min(s2 / 2 + np.sqrt(s2 ** 2 / 4 + cs), c2 / 2 + np.sqrt(c2 ** 2 / 4 + cs))
    phi_site = 0.5 * max(c2, s2, inner)
    phi_all = 0.5 * min(s2 * (2 - s2 / 2), c2 * (2 - c2 / 2))
    return phi_site, phi_all


def partial_swap_jumps():
    """Times where the single-site core purview changes."""
    return float(np.arccos(np.sqrt(2 / 3))), float(np.arccos(1 / np.sqrt(3)))


def z_model_phi_closed(t, whole=False):
    s, c = np.sin(t), np.cos(t)
    if whole:
        return abs(s * c) * (1 + abs(s * c))
    return 2 * s * s * c * c

