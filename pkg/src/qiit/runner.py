"""Config-driven execution of single experiments."""

import json
import logging
import platform
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from . import io
from .channels import HamiltonianSpec, UnitarySpec, sample_haar, unitary_channel
from .config import ConfigError, ExperimentConfig
from .models import DeskLimitError, check_desk_limit, family
from .network import (Network, StateSpec, bell_state, build_state, chain_geometry,
                      complete_geometry, named_ket, product_bloch_vectors, ring_geometry)
from .operators import herm_expm
from .phi import find_complexes, phi, phi_bounds, phi_k, scaling_fit
from .repertoires import (RepertoireTable, average_xi, correlator_table, decay_profile,
                          haar_average_purity, haar_mc_purity, lr_decay_scan,
                          purity_via_correlators, trace_distance_to_mixed, xi_table)
from .subsets import format_mask

log = logging.getLogger(__name__)


@dataclass
class RunRecord:
    config_hash: str
    engine_version: str
    task: str
    timings: dict = field(default_factory=dict)
    files: list = field(default_factory=list)
    scalars: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["files"] = [str(f) for f in self.files]
        return d

    def to_json(self, **extra) -> str:
        return json.dumps({**self.to_dict(), **extra}, indent=2, sort_keys=True, default=float)

    def summary(self) -> str:
        width = max([len(k) for k in self.scalars] + [6])
        lines = [f"task {self.task}  config {self.config_hash[:12]}"]
        for k, v in self.scalars.items():
            val = io.fmt(v) if isinstance(v, (int, float, np.floating, np.integer)) else str(v)
            lines.append(f"  {k:<{width}}  {val}")
        for f in self.files:
            lines.append(f"  wrote {f}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# config -> objects
# ---------------------------------------------------------------------------

_GEOMETRY = {"ring": ring_geometry, "chain": chain_geometry, "complete": complete_geometry}


def build_network(cfg: ExperimentConfig) -> Network:
    n, d = cfg.n_sites, cfg.local_dim
    if cfg.state_kind == "product":
        kets = list(cfg.kets)
        if len(kets) == 1:
            kets = kets * n
        spec = StateSpec.product([named_ket(k, d) for k in kets])
    elif cfg.state_kind == "bloch":
        vecs = list(cfg.bloch)
        if len(vecs) == 1:
            vecs = vecs * n
        spec = StateSpec.from_bloch(vecs)
    elif cfg.state_kind == "bell":
        if (n, d) != (2, 2):
            raise ConfigError("bell state needs 2 qubits")
        spec = StateSpec.explicit(bell_state())
    else:
        spec = StateSpec.explicit(io.load_matrix(cfg.state_matrix))
    geom = None if cfg.geometry == "none" else _GEOMETRY[cfg.geometry](n)
    return Network(n, d, spec, geom)


def build_unitary(cfg: ExperimentConfig, t=None, seed=None) -> np.ndarray:
    n, d = cfg.n_sites, cfg.local_dim
    t = cfg.t if t is None else t
    seed = cfg.gue_seed if seed is None else seed
    kind = cfg.dynamics
    if kind == "partial-swap":
        if (n, d) != (2, 2):
            raise ConfigError("partial-swap needs 2 qubits")
        return herm_expm(UnitarySpec("swap", 2, 2).build(), t)
    if kind == "expm":
        h = HamiltonianSpec(cfg.hamiltonian, n, d, seed=seed,
                            matrix=io.load_matrix(cfg.hamiltonian_matrix)
                            if cfg.hamiltonian == "custom" else None)
        return UnitarySpec("expm", n, d, hamiltonian=h, t=t, sign=cfg.sign).build()
    if kind == "haar":
        return sample_haar(d ** n, seed)
    if kind == "local-product":
        # one Haar factor per site, seeded seed, seed+1, ...
        return UnitarySpec("local-product", n, d,
                           factors=[sample_haar(d, seed + i) for i in range(n)]).build()
    if kind == "custom":
        return UnitarySpec("custom", n, d, matrix=io.load_matrix(cfg.unitary_matrix)).build()
    if kind == "diagonal":
        return UnitarySpec("diagonal", n, d, phases=np.asarray(cfg.phases)).build()
    if kind == "permutation":
        return UnitarySpec("permutation", n, d, perm=cfg.perm).build()
    return UnitarySpec(kind, n, d).build()


def build_channel(cfg: ExperimentConfig, t=None, seed=None):
    u = build_unitary(cfg, t, seed)
    name = cfg.dynamics if cfg.dynamics != "expm" else f"expm:{cfg.hamiltonian}"
    return unitary_channel(u, cfg.n_sites, cfg.local_dim, name)


def sweep_grid(cfg: ExperimentConfig) -> np.ndarray:
    a, b, pts = cfg.sweep
    return np.linspace(a, b, pts)


def detect_jumps(ts, values, factor=5.0):
    """Indices ``i`` with ``|v[i+1]-v[i]|`` above ``factor`` times the
    median adjacent step."""
    deltas = np.abs(np.diff(np.asarray(values, dtype=float)))
    if deltas.size == 0:
        return []
    med = float(np.median(deltas))
    return [i for i, dv in enumerate(deltas) if dv > factor * med and dv > 1e-9]


# ---------------------------------------------------------------------------
# tasks
# ---------------------------------------------------------------------------

def _out(cfg, name):
    return Path(cfg.out_dir) / f"{cfg.stem}_{name}"


def _task_repertoires(cfg, net, psi, rec):
    ch = build_channel(cfg)
    table = RepertoireTable(ch, psi)
    x = "effect" if cfg.direction in ("e", "effect") else "cause"
    rows = []
    size = 1 << net.n_sites
    mechs = [cfg.mechanism] if cfg.mechanism else range(1, size)
    for m in mechs:
        for p in range(1, size):
            rho = table.get(x, p, m)
            side = f"{cfg.stem}_rep_{x}_p{p}_m{m}.qmat"
            rec.files.append(io.write_matrix(Path(cfg.out_dir) / side, rho))
            rows.append((m, format_mask(m), p, format_mask(p), trace_distance_to_mixed(rho), side))
    rec.files.insert(0, io.write_csv(_out(cfg, "repertoires.csv"),
                                     ["mechanism_mask", "mechanism", "purview_mask", "purview",
                                      "xi", "matrix_file"], rows, comment=f"direction={x}"))
    rec.scalars["repertoires"] = len(rows)


def _task_xi(cfg, net, psi, rec):
    ch = build_channel(cfg)
    x = "effect" if cfg.direction in ("e", "effect") else "cause"
    xs = xi_table(ch, psi, x)
    size = 1 << net.n_sites
    rows = [(m, format_mask(m), p, format_mask(p), xs[p, m])
            for m in range(1, size) for p in range(1, size)]
    rec.files.append(io.write_csv(_out(cfg, "xi.csv"),
                                  ["mechanism_mask", "mechanism", "purview_mask", "purview", "xi"],
                                  rows, comment=f"direction={x}"))
    rec.scalars["max_xi"] = float(xs.max())
    if cfg.correlator_check:
        bloch = product_bloch_vectors(net)
        if bloch is None:
            raise ConfigError("correlator check needs a product qubit state")
        table = RepertoireTable(ch, psi)
        worst = 0.0
        for m in range(1, size):
            for p in range(1, size):
                rho = table.get(x, p, m)
                direct = float(np.real(np.vdot(rho, rho)))
                worst = max(worst, abs(direct - purity_via_correlators(
                    correlator_table(ch, p, m, x), bloch)))
        rec.scalars["correlator_purity_max_dev"] = worst


def _task_average_xi(cfg, net, psi, rec):
    ch = build_channel(cfg)
    for x in ("effect", "cause"):
        rec.scalars[f"XI_{x}"] = average_xi(ch, psi, x)
    rec.files.append(io.write_csv(_out(cfg, "average_xi.csv"), ["direction", "XI"],
                                  [(x, rec.scalars[f"XI_{x}"]) for x in ("effect", "cause")]))


def _phi_scalars(rec, res):
    b = phi_bounds(res)
    rec.scalars.update(Phi=res.phi, mip=str(res.mip), concepts=len(res.cs_full),
                       trace_C=b.upper, lower_bound=b.mechanism_lower, core_straddle_sum=b.lower)


def _task_phi(cfg, net, psi, rec):
    ch = build_channel(cfg)
    if cfg.task == "phi-k":
        res = phi_k(ch, psi, cfg.k, cross_check=cfg.cross_check, workers=cfg.workers)
    else:
        res = phi(ch, psi, cross_check=cfg.cross_check, workers=cfg.workers)
    _phi_scalars(rec, res)
    rec.files.append(io.write_partitions(res, _out(cfg, "partitions.csv")))
    rec.files.extend(io.write_cs(res.cs_full, cfg.out_dir, f"{cfg.stem}_cs"))


def _task_sweep(cfg, net, psi, rec):
    ts = sweep_grid(cfg)
    vals = []
    for t in ts:
        vals.append(phi(build_channel(cfg, t=t), psi, workers=cfg.workers).phi)
    jumps = detect_jumps(ts, vals)
    rec.scalars["points"] = len(ts)
    rec.scalars["jumps"] = ";".join(f"[{io.fmt(ts[i])},{io.fmt(ts[i + 1])}]" for i in jumps)
    rec.scalars["Phi_max"] = float(max(vals))
    rec.files.append(io.write_sweep(ts, vals, _out(cfg, "sweep.csv"),
                                    comment=f"dynamics={cfg.dynamics} grid={cfg.sweep}"))


def _task_scaling(cfg, net, psi, rec):
    for n in cfg.sizes:
        check_desk_limit(n, 2, cfg.force_large)
    fit = scaling_fit(family(cfg.family, force=cfg.force_large), cfg.sizes, cfg.prescription,
                      t=cfg.t, action=cfg.action, against=cfg.against, workers=cfg.workers)
    rec.scalars.update(slope=fit.slope, intercept=fit.intercept,
                       excluded=",".join(map(str, fit.excluded)) or "-")
    rec.files.append(io.write_scaling(fit, _out(cfg, "scaling.csv"),
                                      comment=f"family={cfg.family} prescription={cfg.prescription}"))


def _task_complexes(cfg, net, psi, rec):
    records = find_complexes(build_channel(cfg), psi, workers=cfg.workers)
    rec.scalars["complexes"] = ";".join(format_mask(r.subnetwork) for r in records if r.is_complex) or "-"
    rec.files.append(io.write_complexes(records, _out(cfg, "complexes.csv")))


def _task_lr(cfg, net, psi, rec):
    if net.geometry is None:
        raise ConfigError("lr-scan needs a [network] geometry")
    mech = cfg.mechanism or 1
    rows = lr_decay_scan(build_channel(cfg), psi, net, mech,
                         "effect" if cfg.direction in ("e", "effect") else "cause")
    prof = decay_profile(rows)
    rec.scalars["profile"] = ";".join(f"{io.fmt(d)}:{io.fmt(x)}" for d, x in prof)
    rec.files.append(io.write_csv(_out(cfg, "lr.csv"), ["distance", "site", "xi"], rows,
                                  comment=f"mechanism={format_mask(mech)} t={io.fmt(cfg.t)}"))


def _task_haar(cfg, net, psi, rec):
    n, d = cfg.n_sites, cfg.local_dim
    rows = []
    full = (1 << n) - 1
    for x in ("effect", "cause"):
        for kp in range(1, n + 1):
            for km in range(1, n + 1):
                p, m = (1 << kp) - 1, full & ~((1 << (n - km)) - 1)
                vals = haar_mc_purity(n, d, p, m, cfg.seeds, psi, x)
                mean, se = vals.mean(), vals.std(ddof=1) / np.sqrt(len(vals))
                rows.append((x, kp, km, mean, se, haar_average_purity(n, d, kp, km)))
    rec.scalars["max_z"] = max(abs(r[3] - r[5]) / r[4] if r[4] > 0 else 0.0 for r in rows)
    rec.files.append(io.write_csv(_out(cfg, "haar.csv"),
                                  ["direction", "purview_size", "mechanism_size", "mc_mean",
                                   "std_error", "closed_form"], rows,
                                  comment=f"seeds={cfg.seeds[0]}..{cfg.seeds[-1]}"))


def _task_gue(cfg, net, psi, rec):
    ts = sweep_grid(cfg)
    means = []
    for t in ts:
        vals = [phi(build_channel(cfg, t=t, seed=s), psi, workers=cfg.workers).phi
                for s in cfg.seeds]
        means.append(float(np.mean(vals)))
    rec.scalars["Phi_mean_max"] = max(means)
    rec.files.append(io.write_sweep(ts, means, _out(cfg, "gue.csv"),
                                    comment=f"gue samples={len(cfg.seeds)} sign={cfg.sign}"))


_TASKS = {
    "repertoires": _task_repertoires, "xi-table": _task_xi, "average-xi": _task_average_xi,
    "phi": _task_phi, "phi-k": _task_phi, "sweep-t": _task_sweep, "scaling": _task_scaling,
    "complexes": _task_complexes, "lr-scan": _task_lr, "haar-mc": _task_haar,
    "gue-mc": _task_gue,
}


def run(cfg: ExperimentConfig, write_record=True) -> RunRecord:
    """Execute ``cfg.task``, write its CSVs and return the run record."""
    if cfg.task != "scaling":
        check_desk_limit(cfg.n_sites, cfg.local_dim, cfg.force_large)
    if cfg.task == "gue-mc" and (cfg.dynamics, cfg.hamiltonian) != ("expm", "gue"):
        raise ConfigError("gue-mc needs [dynamics] kind = expm with hamiltonian = gue")
    rec = RunRecord(cfg.digest(), __version__, cfg.task)
    t0 = time.perf_counter()
    net = build_network(cfg)
    psi = build_state(net).matrix
    t1 = time.perf_counter()
    _TASKS[cfg.task](cfg, net, psi, rec)
    rec.timings = {"setup_s": t1 - t0, "task_s": time.perf_counter() - t1}
    if write_record:
        path = Path(cfg.out_dir) / f"{cfg.stem}_record.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        rec.files.append(path)
        meta = {"python": platform.python_version(), "numpy": np.__version__,
                "config": cfg.as_dict()}
        path.write_text(rec.to_json(meta=meta) + "\n", encoding="utf-8")
    return rec


__all__ = ["RunRecord", "run", "build_network", "build_channel", "detect_jumps", "DeskLimitError"]
