import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from henon_atlas.errors import AssumptionViolated, NotASaddle31
from henon_atlas.spectrum import (
    CURVE_NAMES, MultiplierSet, RegionLabel, boundary_curves, characteristic, chart_csv,
    classify_point, cubic_discriminant, curves_csv, figure8_inequalities, figure8_region_test,
    lorenz_inequalities, lorenz_region_test, region_label, s_curve_point, saddle_chart,
    saddle_value, solve_characteristic,
)

from oracles import boundary_distance, numpy_roots, root_based_region

coef = st.floats(-6, 6, allow_nan=False)


def test_pure_cube_roots():
    ms = solve_characteristic(0.0, 0.5, 0.0)
    r = 0.5 ** (1 / 3)
    assert ms.roots[0].imag == 0.0
    assert ms.roots[0].real == pytest.approx(r, abs=1e-14)
    mod, arg = ms.pair
    assert mod == pytest.approx(r, abs=1e-14)
    assert arg == pytest.approx(2 * math.pi / 3, abs=1e-12)


def test_root_at_one_on_L_plus():
    ms = solve_characteristic(0.3, 0.5, 0.2)
    assert min(abs(z - 1) for z in ms.roots) < 1e-10


def test_lorenz_point_pattern():
    l1, l2, l3 = (z.real for z in solve_characteristic(-1.1, 0.7, 0.85).roots)
    assert l1 < -1 and 0 < l2 < 1 and -1 < l3 < 0
    assert l2 > abs(l3) and abs(l1 * l2) > 1


@given(coef, coef, coef)
@settings(max_examples=500)
def test_vieta_and_residuals(A, B, C):
    ms = solve_characteristic(A, B, C)
    a, b, c = ms.coefficients()
    scale = max(1.0, abs(A), abs(B), abs(C))
    assert abs(a - A) < 1e-9 * scale
    assert abs(b - B) < 1e-9 * scale ** 1.5
    assert abs(c - C) < 1e-9 * scale
    for z in ms.roots:
        assert abs(characteristic(z, A, B, C)) < 1e-10 * max(1.0, abs(z)) ** 3 * scale


@given(coef, coef, coef)
@settings(max_examples=300)
def test_roots_match_numpy(A, B, C):
    # near-multiple roots are ill-conditioned
    assume(abs(cubic_discriminant(A, B, C)) > 1e-6)
    ours = solve_characteristic(A, B, C).roots
    for w in numpy_roots(A, B, C):
        assert min(abs(z - w) for z in ours) < 1e-6 * max(1.0, abs(w))


@given(coef, st.floats(0.01, 6), coef)
def test_sign_pattern_law(A, B, C):
    ms = solve_characteristic(A, B, C)
    if not ms.has_complex_pair:
        negatives = sum(r < 0 for r in ms.real_roots)
        assert negatives in (0, 2)


def test_saddle_value_examples():
    assert saddle_value(MultiplierSet.from_values([-1.5, 0.8, -0.3])) == pytest.approx(1.2)
    assert saddle_value(MultiplierSet.from_values([2, 0.5, 0.25])) == pytest.approx(1.0)
    pair = 0.4 * cmath.exp(0.7j)
    assert saddle_value(MultiplierSet.from_values([2, pair, pair.conjugate()])) == pytest.approx(0.8)


def test_saddle_value_needs_one_unstable():
    with pytest.raises(NotASaddle31):
        saddle_value(MultiplierSet.from_values([0.5, 0.4, 0.3]))
    with pytest.raises(NotASaddle31):
        saddle_value(MultiplierSet.from_values([2, 1.5, 0.3]))


def test_lorenz_region_examples():
    assert lorenz_region_test(-1.1, 0.7, 0.85)
    assert not lorenz_region_test(0.0, 0.5, 0.0)
    assert not lorenz_region_test(-1.86, 0.72, 0.03)
    assert not lorenz_inequalities(-1.86, 0.72, 0.03)["c"]


def test_figure8_region_examples():
    assert figure8_region_test(-1.86, 0.72, 0.03)
    assert not figure8_region_test(-1.1, 0.7, 0.85)
    assert not figure8_region_test(0.0, 0.5, 0.0)
    assert not figure8_inequalities(0.0, 0.5, 0.0)["a"]


@pytest.mark.parametrize("B", [0.0, -0.3])
def test_region_tests_need_positive_B(B):
    with pytest.raises(AssumptionViolated):
        lorenz_region_test(-1.1, B, 0.85)
    with pytest.raises(AssumptionViolated):
        figure8_region_test(-1.1, B, 0.85)


@pytest.mark.parametrize("A,B,C,label", [
    (0.0, 0.5, 0.0, RegionLabel.Stable),
    (-1.1, 0.7, 0.85, RegionLabel.LA),
    (-1.86, 0.72, 0.03, RegionLabel.A8),
    (0.82, 0.5, 2.06, RegionLabel.D8A),
    (3.71, 0.05, -2.75, RegionLabel.S8A),
    (1.43, 0.5, -1.84, RegionLabel.ShilnikovPoint),
    (2.13, 0.5, -1.29, RegionLabel.SpiralPoint),
    (0.3, 0.5, 0.2, RegionLabel.OnBoundary),
])
def test_classify_point_examples(A, B, C, label):
    assert classify_point(A, B, C)[1] is label
    assert region_label(A, B, C) is label


def test_descriptor_fields():
    desc, _ = classify_point(-1.1, 0.7, 0.85)
    assert desc.unstable_count == 1 and desc.unstable_real
    assert desc.stable_pair_kind == "real"
    assert desc.leading_stable_sign == "+"
    ms = solve_characteristic(-1.1, 0.7, 0.85)
    assert desc.sigma == pytest.approx(saddle_value(ms), abs=1e-9)
    desc, _ = classify_point(0.3, 0.5, 0.2)
    assert desc.on_bifurcation == "L+"


def test_quasi_labels_below_sigma_one():
    # same sign pattern as LA but |l1 l2| < 1
    assert region_label(-1.5, 0.5, 0.45) is RegionLabel.LQA
    assert region_label(-1.5, 0.5, 0.55) is RegionLabel.LA


def test_s_curve_examples():
    assert s_curve_point(1.0, 0.5) == (2.5, -2.0)
    assert s_curve_point(-1.0, 0.5) == (-1.5, 0.0)
    for t, B in [(1.0, 0.5), (-1.0, 0.5)]:
        A, C = s_curve_point(t, B)
        assert abs(cubic_discriminant(A, B, C)) < 1e-12
        assert characteristic(t, A, B, C) == pytest.approx(0.0, abs=1e-14)


@given(st.floats(0.2, 4.0) | st.floats(-4.0, -0.2), st.floats(0.05, 0.95))
def test_s_curve_double_root(t, B):
    A, C = s_curve_point(t, B)
    assert abs(cubic_discriminant(A, B, C)) < 1e-9 * max(1.0, abs(A), abs(C)) ** 4


def test_boundary_curves_lie_on_their_equations():
    B = 0.5
    curves = boundary_curves(B, (-4, 4), 200, (-4, 4))
    assert set(curves) == set(CURVE_NAMES)
    checks = {
        "L+": lambda A, C: C - (1 - A - B),
        "L-": lambda A, C: C - (A + B + 1),
        "Lphi": lambda A, C: C - (B * B - 1 - A * B),
        "sigma": lambda A, C: C - (1 + A * B + B * B),
        "resonance": lambda A, C: A * C + B,
        "S+": lambda A, C: cubic_discriminant(A, B, C),
        "S-": lambda A, C: cubic_discriminant(A, B, C),
    }
    for name, g in checks.items():
        pts = curves[name]
        pts = pts[~np.isnan(pts).any(axis=1)]
        assert len(pts) > 0, name
        for A, C in pts:
            assert abs(g(A, C)) < 1e-9 * max(1.0, abs(A), abs(C)) ** 4, name


def test_L_plus_points_have_unit_root(rng):
    for A in rng.uniform(-4, 4, 200):
        B = 0.5
        ms = solve_characteristic(A, B, 1 - A - B)
        assert min(abs(z - 1) for z in ms.roots) < 1e-10 * max(1, abs(A))


def test_curves_csv_pieces():
    text = curves_csv(boundary_curves(0.5, (-4, 4), 20, (-4, 4)))
    lines = text.splitlines()
    assert lines[0] == "curve,piece,A,C"
    assert all(len(row.split(",")) == 4 for row in lines[1:])


def test_chart_single_cell():
    chart = saddle_chart(0.5, (-1e-3, 1e-3, -1e-3, 1e-3), (1, 1))
    assert chart.labels.shape == (1, 1)
    assert chart.labels[0, 0] == RegionLabel.Stable


def test_chart_matches_pointwise(rng):
    chart = saddle_chart(0.5, (-4, 4, -4, 4), (40, 30))
    A, C = chart.centers()
    for _ in range(100):
        i, j = rng.integers(40), rng.integers(30)
        assert chart.labels[j, i] == region_label(A[i], 0.5, C[j])


def test_chart_scan_sigma_transition():
    # vertical scan at A = -1.5: LQA below C = 0.5, LA above
    chart = saddle_chart(0.5, (-1.5005, -1.4995, 0.0, 1.0), (1, 1000))
    _, C = chart.centers()
    col = chart.labels[:, 0]
    flips = np.nonzero((col[:-1] == RegionLabel.LQA) & (col[1:] == RegionLabel.LA))[0]
    assert len(flips) == 1
    assert abs(0.5 * (C[flips[0]] + C[flips[0] + 1]) - 0.5) <= 1e-3


def test_chart_planar_has_no_spiral_point():
    chart = saddle_chart(0.0, (-4, 4, -4, 4), (200, 200))
    assert not np.any(chart.labels == RegionLabel.SpiralPoint)


def test_chart_csv_layout():
    chart = saddle_chart(0.5, (-4, 4, -4, 4), (3, 2))
    lines = chart_csv(chart).splitlines()
    assert lines[0] == ("A,C,label_code,lambda1_re,lambda1_im,lambda2_re,lambda2_im,"
                        "lambda3_re,lambda3_im,sigma")
    assert len(lines) == 7


@pytest.mark.parametrize("B", [0.5, 0.7])
def test_region_test_oracle_equivalence_sample(B, rng):
    A = rng.uniform(-4, 4, 20000)
    C = rng.uniform(-4, 4, 20000)
    keep = boundary_distance(A, B, C) > 1e-6
    for a, c in zip(A[keep], C[keep]):
        label = region_label(a, B, c)
        assert (label is RegionLabel.LA) == lorenz_region_test(a, B, c)
        assert (label is RegionLabel.A8) == figure8_region_test(a, B, c)
        ref = root_based_region(a, B, c)
        assert (ref == "LA") == (label is RegionLabel.LA)
        assert (ref == "A8") == (label is RegionLabel.A8)
