"""Experiment configuration files.

An INI file (``configparser``) with the sections ``[network]``,
``[state]``, ``[dynamics]``, ``[task]`` and ``[output]``; see the README
for the key grammar. Command-line overrides use ``section.key=value``.
"""

import configparser
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

TASKS = ("repertoires", "xi-table", "average-xi", "phi", "phi-k", "sweep-t", "scaling",
         "complexes", "lr-scan", "haar-mc", "gue-mc")
STOCHASTIC = ("haar-mc", "gue-mc")
DYNAMICS = ("identity", "swap", "partial-swap", "cnot", "permutation", "expm", "haar",
            "diagonal", "local-product", "custom")
HAMILTONIANS = ("xx-ring", "xx-full", "xxx-ring", "xxx-full", "z-global", "swap", "gue", "custom")
STATE_KINDS = ("product", "bloch", "explicit", "bell")
GEOMETRIES = ("none", "ring", "chain", "complete")
FAMILIES = ("z-model", "xx-ring", "xx-full", "xxx-ring", "xxx-full")
PRESCRIPTIONS = ("fixed-t", "constant-action", "argmax-t")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    n_sites: int = 2
    local_dim: int = 2
    geometry: str = "none"
    state_kind: str = "product"
    kets: tuple = ("0",)
    bloch: tuple = ()
    state_matrix: str = ""
    dynamics: str = "identity"
    hamiltonian: str = ""
    t: float = 0.0
    sign: int = -1
    perm: tuple = ()
    phases: tuple = ()
    unitary_matrix: str = ""
    hamiltonian_matrix: str = ""
    gue_seed: int = None
    task: str = "phi"
    k: int = 1
    direction: str = "effect"
    purview: int = 0
    mechanism: int = 0
    sweep: tuple = (0.0, float(np.pi / 2), 128)
    family: str = "z-model"
    sizes: tuple = (3, 4, 5)
    prescription: str = "fixed-t"
    action: float = 2.5
    against: str = "size"
    seeds: tuple = ()
    cross_check: bool = False
    correlator_check: bool = False
    out_dir: str = "out"
    prefix: str = ""
    workers: int = 1
    force_large: bool = False
    source: str = field(default="", compare=False)

    def as_dict(self) -> dict:
        out = {}
        for k, v in self.__dict__.items():
            if k == "source":
                continue
            out[k] = list(v) if isinstance(v, tuple) else v
        return out

    def digest(self) -> str:
        """SHA-256 of the canonical JSON form (output location excluded)."""
        d = self.as_dict()
        for k in ("out_dir", "prefix", "workers"):
            d.pop(k)
        blob = json.dumps(d, sort_keys=True, default=str).encode()
        return hashlib.sha256(blob).hexdigest()

    @property
    def stem(self) -> str:
        return self.prefix or self.task


# ---------------------------------------------------------------------------
# value parsers
# ---------------------------------------------------------------------------

def _list(text):
    return [s.strip() for s in text.replace(";", ",").split(",") if s.strip()]


def _angle(text) -> float:
    """Float that may use ``pi``, e.g. ``pi/4`` or ``0.5*pi``."""
    t = text.strip().lower().replace("π", "pi")
    try:
        return float(t)
    except ValueError:
        pass
    allowed = set("0123456789.+-*/() epi")
    if not set(t) <= allowed:
        raise ConfigError(f"bad number {text!r}")
    try:
        return float(eval(t, {"__builtins__": {}}, {"pi": np.pi}))
    except Exception as exc:
        raise ConfigError(f"bad number {text!r}") from exc


def _ints(text):
    """``0,1,2`` or ``0..99`` (inclusive)."""
    out = []
    for part in _list(text):
        if ".." in part:
            a, b = part.split("..")
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return tuple(out)


def _mask(text) -> int:
    """Site list ``{0,2}`` / ``0,2`` or an integer mask ``m5``."""
    t = text.strip()
    if t.startswith("m"):
        return int(t[1:])
    t = t.strip("{}")
    mask = 0
    for s in _list(t):
        mask |= 1 << int(s)
    return mask


def _sweep(text):
    """``start:stop:points`` or ``start:stop:step=h``."""
    parts = [p.strip() for p in text.split(":")]
    if len(parts) != 3:
        raise ConfigError("sweep must be start:stop:points")
    a, b = _angle(parts[0]), _angle(parts[1])
    if parts[2].startswith("step="):
        h = _angle(parts[2][5:])
        if h <= 0:
            raise ConfigError("sweep step must be positive")
        pts = int(np.floor((b - a) / h + 1e-9)) + 1
    else:
        pts = int(parts[2])
    if pts < 1 or b < a:
        raise ConfigError("sweep grid is empty")
    return (a, b, pts)


def _bool(text):
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"bad boolean {text!r}")


_KEYS = {
    ("network", "n_sites"): ("n_sites", int),
    ("network", "local_dim"): ("local_dim", int),
    ("network", "geometry"): ("geometry", str),
    ("state", "kind"): ("state_kind", str),
    ("state", "kets"): ("kets", lambda s: tuple(_list(s))),
    ("state", "bloch"): ("bloch", lambda s: tuple(tuple(float(x) for x in v.split())
                                                    for v in s.split(";") if v.strip())),
    ("state", "matrix"): ("state_matrix", str),
    ("dynamics", "kind"): ("dynamics", str),
    ("dynamics", "hamiltonian"): ("hamiltonian", str),
    ("dynamics", "t"): ("t", _angle),
    ("dynamics", "sign"): ("sign", int),
    ("dynamics", "perm"): ("perm", _ints),
    ("dynamics", "phases"): ("phases", lambda s: tuple(_angle(x) for x in _list(s))),
    ("dynamics", "matrix"): ("unitary_matrix", str),
    ("dynamics", "hamiltonian_matrix"): ("hamiltonian_matrix", str),
    ("dynamics", "seed"): ("gue_seed", int),
    ("task", "name"): ("task", str),
    ("task", "k"): ("k", int),
    ("task", "direction"): ("direction", str),
    ("task", "purview"): ("purview", _mask),
    ("task", "mechanism"): ("mechanism", _mask),
    ("task", "sweep"): ("sweep", _sweep),
    ("task", "family"): ("family", str),
    ("task", "sizes"): ("sizes", _ints),
    ("task", "prescription"): ("prescription", str),
    ("task", "action"): ("action", _angle),
    ("task", "against"): ("against", str),
    ("task", "seeds"): ("seeds", _ints),
    ("task", "cross_check"): ("cross_check", _bool),
    ("task", "correlator_check"): ("correlator_check", _bool),
    ("output", "dir"): ("out_dir", str),
    ("output", "prefix"): ("prefix", str),
    ("output", "workers"): ("workers", int),
    ("output", "force_large"): ("force_large", _bool),
}


def _apply(cfg, section, key, value):
    try:
        attr, conv = _KEYS[(section, key)]
    except KeyError:
        raise ConfigError(f"unknown key [{section}] {key}") from None
    try:
        setattr(cfg, attr, conv(value))
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[{section}] {key}: {exc}") from exc


def parse_config(text: str, overrides=(), source="") -> ExperimentConfig:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    cfg = ExperimentConfig(source=source)
    for section in cp.sections():
        for key, value in cp.items(section):
            _apply(cfg, section, key, value)
    for item in overrides:
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ConfigError(f"override {item!r} is not section.key=value")
        lhs, value = item.split("=", 1)
        section, key = lhs.split(".", 1)
        _apply(cfg, section.strip(), key.strip(), value)
    validate(cfg)
    return cfg


def load_config(path, overrides=()) -> ExperimentConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file {path} not found")
    return parse_config(path.read_text(encoding="utf-8"), overrides, str(path))


def validate(cfg: ExperimentConfig):
    if cfg.task not in TASKS:
        raise ConfigError(f"unknown task {cfg.task!r}; choose from {', '.join(TASKS)}")
    if cfg.n_sites < 1 or cfg.local_dim < 2:
        raise ConfigError("need n_sites >= 1 and local_dim >= 2")
    if cfg.geometry not in GEOMETRIES:
        raise ConfigError(f"unknown geometry {cfg.geometry!r}")
    if cfg.state_kind not in STATE_KINDS:
        raise ConfigError(f"unknown state kind {cfg.state_kind!r}")
    if cfg.state_kind == "explicit" and not cfg.state_matrix:
        raise ConfigError("explicit state needs [state] matrix")
    if cfg.dynamics not in DYNAMICS:
        raise ConfigError(f"unknown dynamics {cfg.dynamics!r}")
    if cfg.dynamics == "expm" and cfg.hamiltonian not in HAMILTONIANS:
        raise ConfigError(f"unknown hamiltonian {cfg.hamiltonian!r}")
    if cfg.dynamics == "expm" and cfg.hamiltonian == "gue" and cfg.gue_seed is None \
            and cfg.task != "gue-mc":
        raise ConfigError("GUE dynamics need an explicit [dynamics] seed")
    if cfg.dynamics in ("haar", "local-product") and cfg.gue_seed is None:
        raise ConfigError(f"{cfg.dynamics} dynamics need an explicit [dynamics] seed")
    if cfg.sign not in (1, -1):
        raise ConfigError("sign must be +1 or -1")
    if cfg.direction not in ("effect", "cause", "e", "c"):
        raise ConfigError(f"unknown direction {cfg.direction!r}")
    if cfg.task in STOCHASTIC and not cfg.seeds:
        raise ConfigError(f"task {cfg.task} needs explicit [task] seeds")
    if cfg.task == "scaling":
        if cfg.family not in FAMILIES:
            raise ConfigError(f"unknown family {cfg.family!r}")
        if cfg.prescription not in PRESCRIPTIONS:
            raise ConfigError(f"unknown prescription {cfg.prescription!r}")
        if len(cfg.sizes) < 3:
            raise ConfigError("fit requires >= 3 sizes")
        if cfg.against not in ("size", "log-size"):
            raise ConfigError("against must be size or log-size")
    if cfg.task == "phi-k" and not 1 <= cfg.k <= cfg.n_sites:
        raise ConfigError("k must lie in [1, n_sites]")
    if cfg.sweep[2] < 1:
        raise ConfigError("sweep grid is empty")
    if cfg.workers < 1:
        raise ConfigError("workers must be >= 1")
    full = (1 << cfg.n_sites) - 1
    if cfg.purview & ~full or cfg.mechanism & ~full:
        raise ConfigError("purview/mechanism outside the network")
