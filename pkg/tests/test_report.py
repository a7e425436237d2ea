import pytest

from pinchpower.experiments import SweepRecord
from pinchpower.report import render_sweep_figure

RECORDS = [
    SweepRecord(scheme, "target_rate", value, power * scale, 10, 1)
    for scheme, scale in [("pso", 1.0), ("grid", 0.999), ("fixed", 3.0)]
    for value, power in [(1.0, 0.002), (3.0, 0.014), (5.0, 0.062)]
]


def test_renders_png(tmp_path):
    out = render_sweep_figure(RECORDS, tmp_path / "sweep.png")
    data = out.read_bytes()
    assert data[:8] == b"\x89PNG\r\n\x1a\n"
    assert len(data) > 1000


def test_renders_pdf(tmp_path):
    out = render_sweep_figure(RECORDS, tmp_path / "sweep.pdf")
    assert out.read_bytes()[:5] == b"%PDF-"


def test_subset_of_schemes_is_fine(tmp_path):
    only_fixed = [r for r in RECORDS if r.scheme == "fixed"]
    out = render_sweep_figure(only_fixed, tmp_path / "fixed.png", log_scale=True)
    assert out.exists()


def test_png_output_is_deterministic(tmp_path):
    a = render_sweep_figure(RECORDS, tmp_path / "a.png").read_bytes()
    b = render_sweep_figure(RECORDS, tmp_path / "b.png").read_bytes()
    assert a == b


def test_empty_records_rejected(tmp_path):
    with pytest.raises(ValueError):
        render_sweep_figure([], tmp_path / "x.png")


def test_mixed_variables_rejected(tmp_path):
    mixed = RECORDS + [SweepRecord("pso", "outage_cap", 0.1, 0.001, 10, 1)]
    with pytest.raises(ValueError):
        render_sweep_figure(mixed, tmp_path / "x.png")
