"""Data series behind the published figures, with their prescriptions fixed."""

import hashlib
import time
from pathlib import Path

import numpy as np

from . import __version__, io
from .channels import evolution_unitary, sample_gue, unitary_channel
from .models import check_desk_limit, family, partial_swap, product_psi
from .network import KET0
from .phi import phi, scaling_fit
from .runner import RunRecord, detect_jumps

FIGURES = ("fig2-solid", "fig2-gue", "fig3a", "fig3b", "fig5", "fig5-inset")
GUE_SEEDS = tuple(range(100))
SWEEP_POINTS = 128
FIXED_T = 0.5
ACTION = 2.5


def _grid(points=SWEEP_POINTS):
    return np.linspace(0.0, np.pi / 2, points)


def _digest(fig_id, seed, points, sizes):
    return hashlib.sha256(f"{fig_id}|{seed}|{points}|{sizes}".encode()).hexdigest()


def fig2_solid(out, points=SWEEP_POINTS, workers=1):
    ts = _grid(points)
    vals = [phi(*partial_swap(t)[:2], workers=workers).phi for t in ts]
    jumps = detect_jumps(ts, vals)
    comment = f"fig2-solid prescription=exp(itS) state=|0>|0> seed=none grid=linspace(0,pi/2,{points})"
    path = io.write_sweep(ts, vals, out / "fig2_solid.csv", comment)
    return [path], {"Phi_end": vals[-1], "jumps": len(jumps),
                    "jump_brackets": ";".join(f"[{io.fmt(ts[i])},{io.fmt(ts[i + 1])}]" for i in jumps)}


def fig2_gue(out, points=32, seeds=GUE_SEEDS, workers=1):
    ts = _grid(points)
    psi = product_psi(KET0, 2)
    hs = [sample_gue(4, s) for s in seeds]
    means = []
    for t in ts:
        vals = [phi(unitary_channel(evolution_unitary(h, t, +1), 2, 2, "gue"), psi,
                    workers=workers).phi for h in hs]
        means.append(float(np.mean(vals)))
    comment = (f"fig2-gue prescription=exp(+itH_GUE) variance=1 state=|0>|0> "
               f"seeds={seeds[0]}..{seeds[-1]} grid=linspace(0,pi/2,{points})")
    path = io.write_sweep(ts, means, out / "fig2_gue.csv", comment)
    return [path], {"Phi_mean_max": max(means)}


def fig3a(out, points=SWEEP_POINTS, sizes=(3, 4, 5), workers=1):
    ts = _grid(points)
    model = family("z-model")
    rows = []
    for n in sizes:
        for t in ts:
            rows.append((n, t, phi(*model(n, t)[:2], workers=workers).phi, 2 * np.sin(t) ** 2 * np.cos(t) ** 2))
    comment = f"fig3a prescription=exp(itZ) state=|+>^n seed=none grid=linspace(0,pi/2,{points}) sizes={list(sizes)}"
    path = io.write_csv(out / "fig3a.csv", ["size", "t", "Phi", "two_s2c2"], rows, comment)
    ends = [r[2] for r in rows if r[1] in (ts[0], ts[-1])]
    return [path], {"Phi_endpoints_max": max(ends)}


def _fits(out, name, fams, prescriptions, against, sizes, workers, force):
    files, scalars = [], {}
    for fam in fams:
        for pres in prescriptions:
            fit = scaling_fit(family(fam, force=force), sizes, pres, t=FIXED_T, action=ACTION,
                              against=against, workers=workers)
            comment = (f"{name} family={fam} prescription={pres} t={FIXED_T} action={ACTION} "
                       f"argmax=grid64+3trisections seed=none sizes={list(sizes)}")
            files.append(io.write_scaling(fit, out / f"{name}_{fam}_{pres}.csv", comment))
            scalars[f"slope_{fam}_{pres}"] = fit.slope
            scalars[f"intercept_{fam}_{pres}"] = fit.intercept
    return files, scalars


def reproduce(fig_id, out_dir="out", workers=1, sizes=(3, 4, 5), force_large=False,
              points=None, seed=0) -> RunRecord:
    """Emit the CSV series of one figure."""
    if fig_id not in FIGURES:
        raise ValueError(f"unknown figure id {fig_id!r}; choose from {', '.join(FIGURES)}")
    for n in sizes:
        check_desk_limit(n, 2, force_large)
    out = Path(out_dir)
    t0 = time.perf_counter()
    if fig_id == "fig2-solid":
        files, scalars = fig2_solid(out, points or SWEEP_POINTS, workers)
    elif fig_id == "fig2-gue":
        files, scalars = fig2_gue(out, points or 32, tuple(range(seed, seed + len(GUE_SEEDS))), workers)
    elif fig_id == "fig3a":
        files, scalars = fig3a(out, points or SWEEP_POINTS, sizes, workers)
    elif fig_id == "fig3b":
        files, scalars = _fits(out, "fig3b", ["z-model"], ["fixed-t", "constant-action", "argmax-t"],
                               "size", sizes, workers, force_large)
    elif fig_id == "fig5":
        files, scalars = _fits(out, "fig5", ["xx-ring", "xx-full", "xxx-ring", "xxx-full"],
                               ["constant-action"], "log-size", sizes, workers, force_large)
    else:
        files, scalars = _fits(out, "fig5_inset", ["z-model"], ["constant-action"], "size",
                               sizes, workers, force_large)
    rec = RunRecord(_digest(fig_id, seed, points, sizes), __version__, f"reproduce:{fig_id}",
                    {"task_s": time.perf_counter() - t0}, files, scalars)
    path = out / f"{fig_id}_record.json"
    path.write_text(rec.to_json() + "\n", encoding="utf-8")
    rec.files.append(path)
    return rec

