"""Bitmask helpers for subsets of network sites.

A subset of ``Lambda = {0, ..., n-1}`` is an ``int`` whose bit ``j`` is set
when site ``j`` belongs to it. All public functions in the package accept
and return masks in this form.
"""

from functools import lru_cache


def sites_of(mask: int) -> tuple[int, ...]:
    """Ascending tuple of the sites in ``mask``."""
    return _sites_of(mask)


@lru_cache(maxsize=None)
def _sites_of(mask):
    out = []
    j = 0
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return tuple(out)


def mask_of(sites) -> int:
    m = 0
    for s in sites:
        if s < 0:
            raise ValueError(f"negative site index {s}")
        m |= 1 << s
    return m


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def full_mask(n_sites: int) -> int:
    return (1 << n_sites) - 1


def complement(mask: int, n_sites: int) -> int:
    return full_mask(n_sites) & ~mask


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def lowest_site(mask: int) -> int:
    if mask == 0:
        raise ValueError("empty subset has no lowest site")
    return (mask & -mask).bit_length() - 1


def submasks(mask: int):
    """All submasks of ``mask`` in ascending numeric order, ``0`` included."""
    bits = sites_of(mask)
    out = []
    for k in range(1 << len(bits)):
        m = 0
        for i, b in enumerate(bits):
            if k >> i & 1:
                m |= 1 << b
        out.append(m)
    out.sort()
    return out


def format_mask(mask: int) -> str:
    """Human readable form, e.g. ``{0,2}``."""
    return "{" + ",".join(str(s) for s in sites_of(mask)) + "}"
