"""Dense operator kernel: site-aware tensor products, partial traces,
trace norms and Hermitian exponentials.

Operators are dense complex matrices tagged with the ascending tuple of
sites they live on. The matrix index of a ``k``-site operator follows the
usual big-endian Kronecker convention in that ascending site order.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

TOL_HERM = 1e-9
TOL_UNITARY = 1e-10


class SupportError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SupportedOperator:
    """A ``d**k x d**k`` matrix living on the sites ``support``."""

    support: tuple
    matrix: np.ndarray
    local_dim: int = 2

    def __post_init__(self):
        support = tuple(int(s) for s in self.support)
        if any(b <= a for a, b in zip(support, support[1:])):
            raise SupportError(f"support must be strictly increasing, got {support}")
        if support and support[0] < 0:
            raise SupportError("negative site index")
        m = np.asarray(self.matrix, dtype=complex)
        dim = self.local_dim ** len(support)
        if m.shape != (dim, dim):
            raise SupportError(
                f"matrix shape {m.shape} inconsistent with support {support} and d={self.local_dim}"
            )
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_sites(self) -> int:
        return len(self.support)

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def is_scalar(self) -> bool:
        return not self.support

    def __repr__(self):
        return f"SupportedOperator(support={self.support}, dim={self.dim}, d={self.local_dim})"


def scalar(value=1.0, local_dim=2) -> SupportedOperator:
    """Operator on the empty support (a 1x1 matrix)."""
    return SupportedOperator((), np.array([[value]], dtype=complex), local_dim)


def identity(support, local_dim=2, normalized=False) -> SupportedOperator:
    support = tuple(support)
    dim = local_dim ** len(support)
    m = np.eye(dim, dtype=complex)
    if normalized:
        m /= dim
    return SupportedOperator(support, m, local_dim)


def maximally_mixed(support, local_dim=2) -> SupportedOperator:
    return identity(support, local_dim, normalized=True)


# ---------------------------------------------------------------------------
# raw-array primitives (no validation; used in the hot loops)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _merge_axes(sa: tuple, sb: tuple):
    """Axis permutation taking kron(A, B) (site order ``sa + sb``) to
    ascending site order. ``None`` when no permutation is needed."""
    order = sa + sb
    perm = tuple(int(i) for i in np.argsort(order, kind="stable"))
    if perm == tuple(range(len(order))):
        return None
    k = len(order)
    return perm + tuple(p + k for p in perm)


def kron_sorted(a: np.ndarray, sa: tuple, b: np.ndarray, sb: tuple, d: int) -> np.ndarray:
    """Kronecker product of ``a`` (on ``sa``) and ``b`` (on ``sb``) with the
    result's tensor factors reordered into ascending site order."""
    out = np.kron(a, b)
    axes = _merge_axes(sa, sb)
    if axes is None:
        return out
    k = len(sa) + len(sb)
    dim = d ** k
    return out.reshape((d,) * (2 * k)).transpose(axes).reshape(dim, dim)


def kron_sorted_batch(a: np.ndarray, sa: tuple, b: np.ndarray, sb: tuple, d: int) -> np.ndarray:
    """Batched :func:`kron_sorted` over a shared leading axis."""
    n = a.shape[0]
    da, db = a.shape[1], b.shape[1]
    out = np.einsum("nij,nkl->nikjl", a, b).reshape(n, da * db, da * db)
    axes = _merge_axes(sa, sb)
    if axes is None:
        return out
    k = len(sa) + len(sb)
    dim = d ** k
    axes = (0,) + tuple(x + 1 for x in axes)
    return out.reshape((n,) + (d,) * (2 * k)).transpose(axes).reshape(n, dim, dim)


_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


@lru_cache(maxsize=None)
def _ptrace_subscripts(support: tuple, keep: tuple) -> str:
    k = len(support)
    if 2 * k > len(_LETTERS):
        raise SupportError("too many sites for einsum partial trace")
    rows = list(_LETTERS[:k])
    cols = list(_LETTERS[k:2 * k])
    keep_set = set(keep)
    out_rows, out_cols = [], []
    for i, s in enumerate(support):
        if s in keep_set:
            out_rows.append(rows[i])
            out_cols.append(cols[i])
        else:
            cols[i] = rows[i]
    return "".join(rows) + "".join(cols) + "->" + "".join(out_rows) + "".join(out_cols)


def ptrace(x: np.ndarray, support: tuple, keep: tuple, d: int) -> np.ndarray:
    """Reduce ``x`` (on ``support``) to the sites ``keep`` (a sub-tuple)."""
    if len(keep) == len(support):
        return x
    k = len(support)
    if not keep:
        return np.array([[np.trace(x)]])
    sub = _ptrace_subscripts(support, keep)
    dim = d ** len(keep)
    return np.einsum(sub, x.reshape((d,) * (2 * k))).reshape(dim, dim)


def embed(x: np.ndarray, support: tuple, n_sites: int, d: int) -> np.ndarray:
    """``x (on support) tensor 1/d**|rest|`` on the full ``n_sites`` network."""
    rest = tuple(s for s in range(n_sites) if s not in support)
    if not rest:
        return x
    dr = d ** len(rest)
    return kron_sorted(x, tuple(support), np.eye(dr) / dr, rest, d)


def hermitian_part_defect(m: np.ndarray) -> float:
    """Max-abs entry of the anti-Hermitian part of ``m``."""
    return float(np.max(np.abs(m - m.conj().T)) / 2) if m.size else 0.0


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def kron(a: SupportedOperator, b: SupportedOperator) -> SupportedOperator:
    """Tensor product of operators on disjoint supports, site-sorted."""
    if a.local_dim != b.local_dim:
        raise SupportError("local dimension mismatch")
    if set(a.support) & set(b.support):
        raise SupportError(f"support collision: {a.support} vs {b.support}")
    m = kron_sorted(a.matrix, a.support, b.matrix, b.support, a.local_dim)
    return SupportedOperator(tuple(sorted(a.support + b.support)), m, a.local_dim)


def partial_trace(x: SupportedOperator, keep) -> SupportedOperator:
    """Trace out everything but ``keep`` (iterable of sites or a bitmask int)."""
    if isinstance(keep, (int, np.integer)):
        from .subsets import sites_of
        keep = sites_of(int(keep))
    keep = tuple(sorted(keep))
    if not set(keep) <= set(x.support):
        raise SupportError(f"keep={keep} is not a subset of support {x.support}")
    m = ptrace(x.matrix, x.support, keep, x.local_dim)
    return SupportedOperator(keep, m, x.local_dim)


def _check_hermitian(m, what="operator"):
    defect = hermitian_part_defect(m)
    if defect > TOL_HERM:
        raise ValueError(f"{what} is not Hermitian (anti-Hermitian part {defect:.3g})")


def trace_norm(h: SupportedOperator) -> float:
    """Sum of absolute eigenvalues of a Hermitian operator."""
    _check_hermitian(h.matrix)
    return float(np.sum(np.abs(np.linalg.eigvalsh(h.matrix))))


def trace_distance(rho: SupportedOperator, sigma: SupportedOperator) -> float:
    """``D(rho, sigma) = 1/2 ||rho - sigma||_1``."""
    if rho.support != sigma.support or rho.local_dim != sigma.local_dim:
        raise SupportError(f"support mismatch: {rho.support} vs {sigma.support}")
    diff = rho.matrix - sigma.matrix
    _check_hermitian(diff, "difference")
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(diff))))


def purity(rho: SupportedOperator) -> float:
    """``Tr(rho^2)`` for Hermitian ``rho``."""
    m = rho.matrix
    return float(np.real(np.vdot(m.conj().T, m)))


def herm_expm(h, angle: float) -> np.ndarray:
    """``exp(i * angle * H)`` via the Hermitian eigendecomposition.

    ``h`` may be a :class:`SupportedOperator` or a square array.
    """
    m = h.matrix if isinstance(h, SupportedOperator) else np.asarray(h, dtype=complex)
    _check_hermitian(m, "generator")
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    return (v * np.exp(1j * angle * w)) @ v.conj().T


def is_density_operator(m: np.ndarray, tol: float = 1e-10) -> bool:
    if hermitian_part_defect(m) > tol:
        return False
    if abs(np.trace(m) - 1) > tol:
        return False
    return bool(np.linalg.eigvalsh((m + m.conj().T) / 2).min() >= -tol)
