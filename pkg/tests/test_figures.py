import pytest

from qiit.figures import FIGURES, reproduce
from qiit.io import read_csv


def test_fig2_solid_small(tmp_path):
    rec = reproduce("fig2-solid", tmp_path, points=17)
    comment, header, rows = read_csv(tmp_path / "fig2_solid.csv")
    assert "prescription" in comment and "seed" in comment
    assert header == ["t", "Phi"] and len(rows) == 17
    assert rec.scalars["Phi_end"] == pytest.approx(0.5)


def test_fig2_gue_small(tmp_path):
    from qiit import figures
    files, scalars = figures.fig2_gue(tmp_path, points=3, seeds=(0, 1))
    comment, _, rows = read_csv(files[0])
    assert "seeds=0..1" in comment and len(rows) == 3
    assert float(rows[0][1]) == 0.0


def test_fig3a_small(tmp_path):
    rec = reproduce("fig3a", tmp_path, sizes=(3,), points=5)
    assert rec.scalars["Phi_endpoints_max"] == pytest.approx(0.0, abs=1e-12)


def test_unknown_figure(tmp_path):
    assert "fig5-inset" in FIGURES
    with pytest.raises(ValueError):
        reproduce("fig1", tmp_path)
