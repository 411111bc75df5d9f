import numpy as np
import pytest

from qiit.config import ConfigError, _angle, _ints, _mask, _sweep, load_config, parse_config

BASE = """
[network]
n_sites = 3
[state]
kind = product
kets = +
[dynamics]
kind = expm
hamiltonian = xx-ring
t = pi/4   # quarter turn
[task]
name = phi
"""


def test_parse_base():
    cfg = parse_config(BASE)
    assert cfg.n_sites == 3 and cfg.kets == ("+",)
    assert cfg.t == pytest.approx(np.pi / 4)
    assert cfg.hamiltonian == "xx-ring" and cfg.task == "phi"


def test_value_parsers():
    assert _angle("0.5*pi") == pytest.approx(np.pi / 2)
    assert _angle("π/2") == pytest.approx(np.pi / 2)
    with pytest.raises(ConfigError):
        _angle("__import__('os')")
    assert _ints("0..3, 7") == (0, 1, 2, 3, 7)
    assert _mask("{0,2}") == 5 and _mask("m6") == 6 and _mask("1") == 2
    assert _sweep("0:pi/2:128") == (0.0, pytest.approx(np.pi / 2), 128)
    assert _sweep("0:1:step=0.25")[2] == 5
    with pytest.raises(ConfigError):
        _sweep("0:1")
    with pytest.raises(ConfigError):
        _sweep("1:0:5")


def test_overrides_and_digest():
    a = parse_config(BASE)
    b = parse_config(BASE, ["output.dir=elsewhere", "output.workers=4"])
    assert a.digest() == b.digest()
    c = parse_config(BASE, ["dynamics.t=0.3"])
    assert c.t == 0.3 and c.digest() != a.digest()
    with pytest.raises(ConfigError):
        parse_config(BASE, ["t=0.3"])


@pytest.mark.parametrize("sets, msg", [
    (["task.name=dance"], "unknown task"),
    (["network.bogus=1"], "unknown key"),
    (["task.name=haar-mc"], "seeds"),
    (["task.name=scaling", "task.sizes=3,4"], ">= 3 sizes"),
    (["task.name=phi-k", "task.k=9"], "k must"),
    (["dynamics.sign=2"], "sign"),
    (["dynamics.hamiltonian=gue"], "seed"),
    (["task.mechanism={5}"], "outside"),
    (["output.force_large=maybe"], "boolean"),
    (["network.n_sites=three"], "n_sites"),
])
def test_validation_errors(sets, msg):
    with pytest.raises(ConfigError, match=msg):
        parse_config(BASE, sets)


def test_duplicate_section_is_an_error():
    with pytest.raises(ConfigError, match="already exists"):
        parse_config(BASE + "[network]\nn_sites = 2\n")


def test_load_config(tmp_path):
    p = tmp_path / "e.ini"
    p.write_text(BASE)
    assert load_config(p).source == str(p)
    with pytest.raises(ConfigError, match="not found"):
        load_config(tmp_path / "missing.ini")


def test_bloch_vectors():
    cfg = parse_config("[network]\nn_sites = 2\n[state]\nkind = bloch\nbloch = 0 0 1; 1 0 0\n")
    assert cfg.bloch == ((0.0, 0.0, 1.0), (1.0, 0.0, 0.0))


def test_shipped_configs_parse():
    from pathlib import Path
    paths = sorted((Path(__file__).parent.parent / "configs").glob("*.ini"))
    assert paths
    for p in paths:
        load_config(p)
