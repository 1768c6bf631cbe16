import hashlib
import json
import math
from pathlib import Path

import numpy as np
import pytest

from henon_atlas.lyapunov import AttractorClass, LyapunovConfig, classify_attractor, lyapunov_spectrum
from henon_atlas.mapcore import HenonMap, PolyNonlinearity
from henon_atlas.presets import get_preset
from henon_atlas.raster import ATTRACTOR_PALETTE, read_ppm
from henon_atlas.spectrum import RegionLabel, region_label
from henon_atlas.sweep import (
    CSV_HEADER, Diagram, SweepSpec, export_csv, metadata, metadata_json, read_csv, render_ppm,
    run_sweep,
)

GOLDEN = Path(__file__).parent / "golden" / "lorenz16.json"
FAST = LyapunovConfig(n_transient=1000, n_measure=20_000)
Z2 = PolyNonlinearity({(0, 2): -1.0})


def point_spec(A, B, C, f=Z2, cfg=LyapunovConfig()):
    h = 1e-9
    return SweepSpec(B, f, (A - h, A + h, C - h, C + h), (1, 1), cfg)


def lorenz16():
    return SweepSpec(0.7, Z2, (-1.2, -1.0, 0.7, 0.9), (16, 16), FAST)


def fake_diagram(classes, overlay=False):
    classes = np.asarray(classes, dtype=np.int64)
    H, W = classes.shape
    spec = SweepSpec(0.5, Z2, (0.0, 1.0, 0.0, 1.0), (W, H), FAST, overlay)
    spectra = np.full((H, W, 3), np.nan)
    return Diagram(spec, classes, spectra, np.full((H, W), np.nan), np.zeros((H, W), dtype=np.int64))


def test_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec(0.5, Z2, (1.0, 0.0, 0.0, 1.0), (2, 2))
    with pytest.raises(ValueError):
        SweepSpec(0.5, Z2, (0.0, 1.0, 0.0, 1.0), (0, 2))


def test_cell_centers():
    spec = SweepSpec(0.5, Z2, (0.0, 1.0, -1.0, 1.0), (4, 2))
    A, C = spec.centers()
    np.testing.assert_allclose(A, [0.125, 0.375, 0.625, 0.875])
    np.testing.assert_allclose(C, [-0.5, 0.5])


def test_single_cell_stable_origin():
    d = run_sweep(point_spec(0.0, 0.5, 0.0))
    assert d.classes[0, 0] == AttractorClass.Periodic
    assert d.regions[0, 0] == RegionLabel.Stable


def test_single_cell_lorenz_region():
    d = run_sweep(point_spec(-1.1, 0.7, 0.85))
    assert d.regions[0, 0] == RegionLabel.LA
    assert d.classes[0, 0] in (AttractorClass.ChaosZero2, AttractorClass.HomoclinicChaos)


@pytest.mark.xfail(strict=True, reason="orbits of 10^6 steps from near O stay farther than 1e-4 "
                   "from O at this point; see the decisions ledger")
def test_single_cell_lorenz_homoclinic():
    d = run_sweep(point_spec(-1.1, 0.7, 0.85))
    assert d.classes[0, 0] == AttractorClass.HomoclinicChaos


@pytest.mark.xfail(strict=True, reason="orbits of 10^6 steps from near O stay farther than 1e-4 "
                   "from O at this point; see the decisions ledger")
def test_single_cell_fig8_homoclinic():
    p = get_preset("fig8-quad")
    d = run_sweep(point_spec(-1.86, 0.72, 0.03, p.nonlinearity))
    assert d.classes[0, 0] == AttractorClass.HomoclinicChaos


def test_single_cell_fig8_region():
    p = get_preset("fig8-quad")
    d = run_sweep(point_spec(-1.86, 0.72, 0.03, p.nonlinearity, FAST))
    assert d.regions[0, 0] == RegionLabel.A8


def test_render_escape_pixel():
    data = render_ppm(fake_diagram([[0]]))
    assert data == b"P6\n1 1\n255\n" + bytes([255, 255, 255])


def test_render_two_pixels():
    data = render_ppm(fake_diagram([[1, 6]]))
    assert data == b"P6\n2 1\n255\n" + bytes([0, 160, 0, 80, 80, 80])


def test_render_orientation():
    # row j = 0 is the lowest C and must come out at the bottom
    img = read_ppm(render_ppm(fake_diagram([[1], [6]])))
    assert tuple(img[0, 0]) == (80, 80, 80)
    assert tuple(img[1, 0]) == (0, 160, 0)


def test_palette_table():
    assert ATTRACTOR_PALETTE.tolist() == [
        [255, 255, 255], [0, 160, 0], [120, 200, 255], [255, 220, 0],
        [220, 0, 0], [0, 0, 140], [80, 80, 80]]


def test_overlay_draws_black():
    d = run_sweep(lorenz16())
    plain = read_ppm(render_ppm(d, overlay=False))
    over = read_ppm(render_ppm(d, overlay=True))
    black = np.all(over == 0, axis=2)
    assert black.any()
    assert np.array_equal(over[~black], plain[~black])


def test_export_csv_single_cell():
    d = run_sweep(point_spec(0.0, 0.5, 0.0, cfg=FAST))
    lines = export_csv(d).splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 2


def test_export_csv_escape_fields():
    text = export_csv(fake_diagram([[0, 0]]))
    row = text.splitlines()[1].split(",")
    assert row[4] == "0"
    assert row[6:] == ["nan"] * 5


def test_csv_round_trip_and_order():
    d = run_sweep(SweepSpec(0.7, Z2, (-1.2, -1.0, 0.7, 0.9), (5, 3), FAST))
    rows = read_csv(export_csv(d))
    assert [(r["j"], r["i"]) for r in rows] == [(j, i) for j in range(3) for i in range(5)]
    for r in rows:
        assert r["class_code"] == d.classes[r["j"], r["i"]]
        assert r["region_code"] == d.regions[r["j"], r["i"]]


def test_cell_consistency_with_single_runs():
    spec = SweepSpec(0.7, Z2, (-1.2, -1.0, 0.7, 0.9), (4, 4), FAST)
    d = run_sweep(spec)
    A, C = spec.centers()
    cfg = FAST.replace(sample_size=0)
    for j in range(4):
        for i in range(4):
            m = HenonMap(A[i], 0.7, C[j], Z2)
            run = lyapunov_spectrum(m, cfg=cfg)
            assert d.classes[j, i] == classify_attractor(run, cfg)
            assert d.regions[j, i] == region_label(A[i], 0.7, C[j])
            if run.spectrum is not None:
                assert tuple(d.spectra[j, i]) == run.spectrum


def test_thread_count_does_not_change_output():
    spec = SweepSpec(0.7, Z2, (-1.2, -1.0, 0.7, 0.9), (12, 9), FAST)
    a = run_sweep(spec, threads=1)
    b = run_sweep(spec, threads=4)
    assert export_csv(a) == export_csv(b)
    assert render_ppm(a) == render_ppm(b)


def test_golden_lorenz16():
    d = run_sweep(lorenz16())
    digests = {
        "csv": hashlib.sha256(export_csv(d).encode()).hexdigest(),
        "ppm": hashlib.sha256(render_ppm(d)).hexdigest(),
    }
    assert digests == json.loads(GOLDEN.read_text())


def test_coverage_law():
    # homoclinic cells in LA / A8 must contract volume (sum = ln B < 0)
    d = run_sweep(SweepSpec(0.7, Z2, (-1.2, -1.0, 0.7, 0.9), (8, 8), FAST))
    mask = (d.classes == AttractorClass.HomoclinicChaos) & np.isin(d.regions, [RegionLabel.LA, RegionLabel.A8])
    assert np.all(np.nansum(d.spectra[mask], axis=1) < 0)
    finite = ~np.isnan(d.spectra[..., 0])
    assert np.allclose(np.sum(d.spectra[finite], axis=1), math.log(0.7), atol=5e-2)


def test_metadata_sidecar():
    d = fake_diagram([[1]])
    meta = metadata(d, timestamp=False)
    assert "created" not in meta
    assert meta["palette"]["6"] == [80, 80, 80]
    assert json.loads(metadata_json(d, timestamp=False)) == meta
    assert "created" in metadata(d, timestamp=True)
