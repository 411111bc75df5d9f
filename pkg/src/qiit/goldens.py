"""Regression corpus of published example values."""

from dataclasses import dataclass

import numpy as np

from .channels import identity_channel, unitary_channel, UnitarySpec
from .concepts import conceptual_structure
from .models import cnot_model, partial_swap, permutation_model, product_psi, swap_model
from .network import KET0, bell_state
from .phi import phi
from .repertoires import average_xi, cause_effect_info

GOLDEN_TOL = 1e-9


@dataclass(frozen=True)
class Golden:
    name: str
    expected: float
    computed: float
    tol: float = GOLDEN_TOL

    @property
    def delta(self) -> float:
        return abs(self.computed - self.expected)

    @property
    def ok(self) -> bool:
        return self.delta <= self.tol


def xi_identity_closed(n_sites, d):
    """Average cause/effect information of the identity on a pure product state."""
    return 1 - ((3 * d + 1) / (4 * d)) ** n_sites


def golden_table():
    out = []
    ch, psi, _ = swap_model()
    e = "effect"
    out += [
        Golden("swap xi(2|1)", 0.5, cause_effect_info(ch, psi, e, 0b10, 0b01)),
        Golden("swap xi(1|2)", 0.5, cause_effect_info(ch, psi, e, 0b01, 0b10)),
        Golden("swap xi(L|L)", 0.75, cause_effect_info(ch, psi, e, 0b11, 0b11)),
    ]
    cs = conceptual_structure(ch, psi)
    tab = cs.phi_table
    for x in ("effect", "cause"):
        out += [
            Golden(f"swap phi_{x}(2|1)", 0.5, tab.get(x, 0b10, 0b01)),
            Golden(f"swap phi_{x}(1|2)", 0.5, tab.get(x, 0b01, 0b10)),
            Golden(f"swap phi_{x}(1|1)", 0.0, tab.get(x, 0b01, 0b01)),
            Golden(f"swap phi_{x}(L|L)", 0.0, tab.get(x, 0b11, 0b11)),
        ]
    out.append(Golden("swap concepts", 2, len(cs)))
    out.append(Golden("swap Phi", 0.5, phi(ch, psi, cs=cs).phi))
    out.append(Golden("XI identity n=1 d=2", 1 / 8, average_xi(identity_channel(1), product_psi(KET0, 1))))
    out.append(Golden("XI identity n=2 d=2", 15 / 64, average_xi(identity_channel(2), product_psi(KET0, 2))))
    for d in (2, 3):
        for n in (1, 2, 3, 4):
            ket = np.zeros(d, dtype=complex)
            ket[0] = 1
            out.append(Golden(f"XI identity n={n} d={d} closed form", xi_identity_closed(n, d),
                              average_xi(identity_channel(n, d), product_psi(ket, n))))
    out.append(Golden("XI swap", 15 / 64, average_xi(ch, psi)))
    out.append(Golden("XI cNOT |11>", 11 / 64, average_xi(*cnot_model()[:2])))
    out.append(Golden("Bell identity Phi", 0.75, phi(identity_channel(2), bell_state()).phi))
    out.append(Golden("identity product Phi", 0.0, phi(identity_channel(2), product_psi(KET0, 2)).phi))
    out.append(Golden("perm two 2-cycles Phi", 0.0, phi(*permutation_model([1, 0, 3, 2])[:2]).phi))
    out.append(Golden("perm 4-cycle Phi", 0.75, phi(*permutation_model([1, 2, 3, 0])[:2]).phi))
    out.append(Golden("perm 2-cycle Phi", 0.5, phi(*permutation_model([1, 0])[:2]).phi))
    out.append(Golden("partial swap Phi(0)", 0.0, phi(*partial_swap(0.0)[:2]).phi))
    out.append(Golden("partial swap Phi(pi/2)", 0.5, phi(*partial_swap(np.pi / 2)[:2]).phi))
    diag = unitary_channel(UnitarySpec("diagonal", 3, 2, phases=np.arange(8) * 0.37).build(), 3, 2)
    out.append(Golden("diagonal unitary Phi", 0.0, phi(diag, product_psi(KET0, 3)).phi))
    return out


def goldens(stream=None):
    """Evaluate the corpus, print one line per item and return the list."""
    rows = golden_table()
    if stream is not None:
        for g in rows:
            mark = "ok  " if g.ok else "FAIL"
            print(f"{mark} {g.name:<34} expected={g.expected:.12g} computed={g.computed:.12g} "
                  f"delta={g.delta:.3g}", file=stream)
        bad = sum(not g.ok for g in rows)
        print(f"{len(rows) - bad}/{len(rows)} golden values within tolerance", file=stream)
    return rows
