"""CSV tables and the binary matrix sidecar.

Sidecar layout (little-endian): 8-byte magic ``QIITMAT\\0``, ``uint32``
rows, ``uint32`` cols, then ``rows*cols`` complex128 entries in row-major
order, each stored as a (real, imag) pair of float64.
"""

import csv
import struct
from pathlib import Path

import numpy as np

from .repertoires import DIRECTIONS
from .subsets import format_mask

MAGIC = b"QIITMAT\0"
_HEADER = struct.Struct("<8sII")


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def write_csv(path, header, rows, comment=None) -> Path:
    """Write a UTF-8 CSV; ``comment`` becomes a leading ``# ...`` line."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    return path


def read_csv(path):
    """Return ``(comment, header, rows)`` with rows as lists of strings."""
    comment = None
    with open(path, newline="", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if lines and lines[0].startswith("#"):
        comment = lines[0][1:].strip()
        lines = lines[1:]
    reader = list(csv.reader(lines))
    return comment, reader[0], reader[1:]


def write_matrix(path, m) -> Path:
    m = np.ascontiguousarray(m, dtype="<c16")
    if m.ndim != 2:
        raise ValueError("sidecar matrices must be 2-D")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, m.shape[0], m.shape[1]))
        fh.write(m.tobytes(order="C"))
    return path


def read_matrix(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise ValueError("truncated matrix sidecar")
    magic, rows, cols = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise ValueError("not a matrix sidecar (bad magic)")
    body = raw[_HEADER.size:]
    if len(body) != rows * cols * 16:
        raise ValueError(f"sidecar body has {len(body)} bytes, expected {rows * cols * 16}")
    return np.frombuffer(body, dtype="<c16").reshape(rows, cols).astype(complex)


def load_matrix(path) -> np.ndarray:
    """Matrix from a sidecar, a ``.npy`` file or a CSV of complex literals."""
    path = Path(path)
    if path.suffix == ".npy":
        return np.asarray(np.load(path), dtype=complex)
    if path.suffix == ".csv":
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
        return np.array([[complex(x.strip().replace(" ", "")) for x in r] for r in rows])
    return read_matrix(path)


# ---------------------------------------------------------------------------
# table emitters
# ---------------------------------------------------------------------------

def cs_rows(cs):
    for m in cs.mechanisms():
        c = cs.concepts[m]
        for x in DIRECTIONS:
            yield m, format_mask(m), x, c.core(x), format_mask(c.core(x)), c.phi, \
                c.phi_effect if x == DIRECTIONS[0] else c.phi_cause


def write_cs(cs, directory, stem="cs") -> list:
    """Concept listing plus one sidecar per core repertoire."""
    directory = Path(directory)
    rows, files = [], []
    for m, name, x, core, core_name, phi_m, phi_x in cs_rows(cs):
        side = f"{stem}_m{m}_{x}.qmat"
        files.append(write_matrix(directory / side, cs.concepts[m].rep(x)))
        rows.append((m, name, x, core, core_name, phi_m, phi_x, side))
    header = ["mechanism_mask", "mechanism", "direction", "core_mask", "core", "phi_M",
              "phi_direction", "repertoire_file"]
    files.insert(0, write_csv(directory / f"{stem}.csv", header, rows))
    return files


def write_partitions(result, path) -> Path:
    rows = [(bp.part1, str(bp), d) for bp, d in result.per_partition]
    return write_csv(path, ["partition_mask", "partition", "distance"], rows,
                     comment=f"Phi={fmt(result.phi)} mip={result.mip}")


def write_sweep(ts, phis, path, comment=None) -> Path:
    return write_csv(path, ["t", "Phi"], zip(ts, phis), comment)


def write_scaling(fit, path, comment=None) -> Path:
    rows = []
    for n, t, v in zip(fit.sizes, fit.times, fit.phis):
        rows.append((n, t, v, np.log2(v) if v > 0 else "nan", n in fit.excluded))
    note = f"slope={fmt(fit.slope)} intercept={fmt(fit.intercept)} against={fit.against}"
    return write_csv(path, ["size", "t", "Phi", "log2_Phi", "excluded"], rows,
                     comment=f"{comment} {note}" if comment else note)


def write_complexes(records, path) -> Path:
    rows = [(r.subnetwork, format_mask(r.subnetwork), r.phi, r.is_complex) for r in records]
    return write_csv(path, ["subnetwork_mask", "subnetwork", "Phi", "is_complex"], rows)
