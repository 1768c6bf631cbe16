"""Multipliers of the origin, region labels and saddle charts.

The characteristic polynomial of the origin is

    chi(l) = l^3 - A l^2 - C l - B

and depends only on (A, B, C), never on the nonlinearity.
"""
from __future__ import annotations

import cmath
import enum
import io
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .errors import AssumptionViolated, NotASaddle31

DEFAULT_TOL = 1e-9


class RegionLabel(enum.IntEnum):
    Stable = K.STABLE
    LA = K.LA
    LQA = K.LQA
    A8 = K.A8
    QA8 = K.QA8
    D8A = K.D8A
    D8QA = K.D8QA
    S8A = K.S8A
    S8QA = K.S8QA
    SpiralPoint = K.SPIRAL
    ShilnikovPoint = K.SHILNIKOV
    Saddle12Real = K.SADDLE12
    Saddle21Mixed = K.SADDLE21MIXED
    Repeller = K.REPELLER
    OnBoundary = K.ON_BOUNDARY


_MARKERS = {K.NO_MARK: None, K.MARK_LPLUS: "L+", K.MARK_LMINUS: "L-",
            K.MARK_LPHI: "Lphi", K.MARK_DOUBLE: "double-root"}


def _order_key(z: complex):
    return (-abs(z), z.imag != 0.0, -z.real, -z.imag)


@dataclass(frozen=True)
class MultiplierSet:
    """Three multipliers sorted by decreasing modulus.

    A complex pair is stored with the positive imaginary part first.
    """

    roots: tuple[complex, complex, complex]

    @classmethod
    def from_values(cls, values) -> "MultiplierSet":
        vals = [complex(v) for v in values]
        if len(vals) != 3:
            raise ValueError("need exactly three multipliers")
        return cls(tuple(sorted(vals, key=_order_key)))

    @property
    def has_complex_pair(self) -> bool:
        return any(z.imag != 0.0 for z in self.roots)

    @property
    def moduli(self) -> tuple[float, float, float]:
        return tuple(abs(z) for z in self.roots)

    @property
    def unstable_count(self) -> int:
        return sum(m > 1.0 for m in self.moduli)

    @property
    def real_roots(self) -> list[float]:
        return [z.real for z in self.roots if z.imag == 0.0]

    @property
    def pair(self) -> tuple[float, float] | None:
        """(modulus, argument) of the complex pair, if there is one."""
        for z in self.roots:
            if z.imag > 0.0:
                return abs(z), cmath.phase(z)
        return None

    def coefficients(self) -> tuple[float, float, float]:
        """(A, B, C) recovered from the roots by Vieta's formulas."""
        l1, l2, l3 = self.roots
        A = (l1 + l2 + l3).real
        C = -(l1 * l2 + l1 * l3 + l2 * l3).real
        B = (l1 * l2 * l3).real
        return A, B, C


@dataclass(frozen=True)
class FixedPointDescriptor:
    unstable_count: int
    unstable_real: bool
    stable_pair_kind: str          # "real" | "complex" | "n/a"
    real_signs: tuple[str, ...]    # signs of the real multipliers, in MultiplierSet order
    leading_stable_sign: str       # "+" | "-" | "n/a"
    sigma: float                   # nan unless exactly one unstable multiplier
    on_bifurcation: str | None = None


def characteristic(lam, A: float, B: float, C: float):
    return ((lam - A) * lam - C) * lam - B


def cubic_discriminant(A: float, B: float, C: float) -> float:
    return float(K.cubic_discriminant(float(A), float(B), float(C)))


def solve_characteristic(A: float, B: float, C: float) -> MultiplierSet:
    out, _ = K.cubic_roots(float(A), float(B), float(C))
    return MultiplierSet.from_values(
        [complex(out[0], out[1]), complex(out[2], out[3]), complex(out[4], out[5])]
    )


def saddle_value(m: MultiplierSet) -> float:
    """|unstable multiplier| times the largest stable modulus."""
    if m.unstable_count != 1:
        raise NotASaddle31(f"{m.unstable_count} unstable multipliers")
    mods = m.moduli
    return mods[0] * mods[1]


def _require_positive_B(B):
    if not B > 0.0:
        raise AssumptionViolated(f"region tests assume B > 0, got B={B!r}")


def lorenz_inequalities(A: float, B: float, C: float) -> dict[str, bool]:
    _require_positive_B(B)
    return {
        "a": C > A + B + 1.0,
        "b": C < 1.0 - B - A,
        "c": A < 0.0 and C > -B / A,
        "d": C > 1.0 + A * B + B * B,
    }


def figure8_inequalities(A: float, B: float, C: float) -> dict[str, bool]:
    _require_positive_B(B)
    return {
        "a": C > A + B + 1.0,
        "b": C < 1.0 - B - A,
        "c": A < 0.0 and C < -B / A,
        "d": C < -1.0 - B * A + B * B,
    }


def lorenz_region_test(A: float, B: float, C: float) -> bool:
    """Parameter-space test for the discrete Lorenz domain LA (needs B > 0)."""
    return all(lorenz_inequalities(A, B, C).values())


def figure8_region_test(A: float, B: float, C: float) -> bool:
    """Parameter-space test for the discrete figure-8 domain A8 (needs B > 0)."""
    return all(figure8_inequalities(A, B, C).values())


def _descriptor(m: MultiplierSet, B: float, n_u: int, sigma: float, marker: int) -> FixedPointDescriptor:
    roots = m.roots
    unstable = [z for z in roots if abs(z) > 1.0]
    stable = [z for z in roots if abs(z) < 1.0]
    if B == 0.0:
        # the structural zero multiplier is not counted in the planar limit
        stable = [z for z in stable if z != 0] or stable
    unstable_real = bool(unstable) and all(z.imag == 0.0 for z in unstable)
    if len(stable) >= 2:
        pair_kind = "complex" if any(z.imag != 0.0 for z in stable) else "real"
    else:
        pair_kind = "n/a"
    if stable and stable[0].imag == 0.0 and stable[0].real != 0.0:
        lead = "+" if stable[0].real > 0 else "-"
    else:
        lead = "n/a"
    signs = tuple("+" if z.real > 0 else ("-" if z.real < 0 else "0")
                  for z in roots if z.imag == 0.0)
    return FixedPointDescriptor(
        unstable_count=n_u,
        unstable_real=unstable_real,
        stable_pair_kind=pair_kind,
        real_signs=signs,
        leading_stable_sign=lead,
        sigma=float(sigma),
        on_bifurcation=_MARKERS[int(marker)],
    )


def classify_point(A: float, B: float, C: float, tol: float = DEFAULT_TOL
                   ) -> tuple[FixedPointDescriptor, RegionLabel]:
    label, n_u, sigma, marker, out, _ = K.classify_core(float(A), float(B), float(C), float(tol))
    m = MultiplierSet.from_values(
        [complex(out[0], out[1]), complex(out[2], out[3]), complex(out[4], out[5])]
    )
    return _descriptor(m, B, n_u, sigma, marker), RegionLabel(int(label))


def region_label(A: float, B: float, C: float, tol: float = DEFAULT_TOL) -> RegionLabel:
    return RegionLabel(int(K.classify_core(float(A), float(B), float(C), float(tol))[0]))


# -- boundary curves ---------------------------------------------------------

CURVE_NAMES = ("L+", "L-", "Lphi", "sigma", "resonance", "S+", "S-")


def s_curve_point(t: float, B: float) -> tuple[float, float]:
    """(A, C) where t is a double root of chi: chi(t) = chi'(t) = 0."""
    return 2.0 * t + B / t**2, -t * t - 2.0 * B / t


def _clip(points: np.ndarray, C_range) -> np.ndarray:
    if C_range is None:
        return points
    lo, hi = C_range
    pad = hi - lo
    bad = (points[:, 1] < lo - pad) | (points[:, 1] > hi + pad)
    points = points.copy()
    points[bad] = np.nan
    return points


def boundary_curves(B: float, A_range, samples: int, C_range=None) -> dict[str, np.ndarray]:
    """Polylines (N x 2 arrays of (A, C)) of the saddle-chart boundaries.

    Rows of NaN separate disconnected pieces.  With ``C_range`` given,
    points far outside it are dropped (as NaN breaks).
    """
    if samples < 2:
        raise ValueError("samples must be >= 2")
    a0, a1 = map(float, A_range)
    A = np.linspace(a0, a1, samples)
    curves: dict[str, np.ndarray] = {}
    curves["L+"] = np.column_stack([A, 1.0 - A - B])
    curves["L-"] = np.column_stack([A, A + B + 1.0])
    lo, hi = max(a0, B - 2.0), min(a1, B + 2.0)
    if lo < hi:
        Ap = np.linspace(lo, hi, samples)
        curves["Lphi"] = np.column_stack([Ap, B * B - 1.0 - Ap * B])
    else:
        curves["Lphi"] = np.empty((0, 2))
    curves["sigma"] = np.column_stack([A, 1.0 + A * B + B * B])
    if a0 < 0.0:
        top = min(a1, -1e-9)
        if C_range is not None and B != 0.0:
            # |C| = |B/A| leaves the window once |A| < |B| / max|C|
            cmax = max(abs(C_range[0]), abs(C_range[1]), 1e-300)
            top = min(top, -abs(B) / (2.0 * cmax))
        if a0 < top:
            Ar = np.linspace(a0, top, samples)
            curves["resonance"] = _clip(np.column_stack([Ar, -B / Ar]), C_range)
        else:
            curves["resonance"] = np.empty((0, 2))
    else:
        curves["resonance"] = np.empty((0, 2))
    dense = max(samples, 2) * 8
    for name, sign in (("S+", 1.0), ("S-", -1.0)):
        t = sign * np.logspace(-3, 3, dense)
        Ac, Cc = 2.0 * t + B / t**2, -t * t - 2.0 * B / t
        pts = np.column_stack([Ac, Cc])
        outside = (Ac < a0) | (Ac > a1)
        if C_range is not None:
            outside |= (Cc < C_range[0]) | (Cc > C_range[1])
        pts[outside] = np.nan
        curves[name] = pts
    for name in ("L+", "L-", "Lphi", "sigma"):
        curves[name] = _clip(curves[name], C_range)
    return curves


# -- saddle chart -------------------------------------------------------------

@dataclass(frozen=True)
class SaddleChart:
    B: float
    rect: tuple[float, float, float, float]
    labels: np.ndarray     # (H, W) region codes, row j is C, column i is A
    roots: np.ndarray      # (H, W, 3) complex, sorted by decreasing modulus
    sigma: np.ndarray      # (H, W), nan where undefined

    @property
    def resolution(self) -> tuple[int, int]:
        H, W = self.labels.shape
        return W, H

    def centers(self):
        A_min, A_max, C_min, C_max = self.rect
        W, H = self.resolution
        A = A_min + (np.arange(W) + 0.5) * (A_max - A_min) / W
        C = C_min + (np.arange(H) + 0.5) * (C_max - C_min) / H
        return A, C


def saddle_chart(B: float, rect, resolution, tol: float = DEFAULT_TOL) -> SaddleChart:
    A_min, A_max, C_min, C_max = map(float, rect)
    W, H = map(int, resolution)
    if W < 1 or H < 1:
        raise ValueError("resolution must be at least 1x1")
    labels, raw, sigma = K.chart_core(float(B), A_min, A_max, C_min, C_max, W, H, float(tol))
    roots = raw[..., 0::2] + 1j * raw[..., 1::2]
    # sort each cell's roots like MultiplierSet does
    mods = np.abs(roots)
    order = np.lexsort((-roots.imag, -roots.real, roots.imag != 0, -mods), axis=-1)
    roots = np.take_along_axis(roots, order, axis=-1)
    return SaddleChart(float(B), (A_min, A_max, C_min, C_max), labels, roots, sigma)


def chart_csv(chart: SaddleChart) -> str:
    buf = io.StringIO()
    buf.write("A,C,label_code,lambda1_re,lambda1_im,lambda2_re,lambda2_im,"
              "lambda3_re,lambda3_im,sigma\n")
    A, C = chart.centers()
    W, H = chart.resolution
    for j in range(H):
        for i in range(W):
            r = chart.roots[j, i]
            fields = [A[i], C[j]]
            row = [_fmt(v) for v in fields] + [str(int(chart.labels[j, i]))]
            for z in r:
                row += [_fmt(z.real), _fmt(z.imag)]
            row.append(_fmt(chart.sigma[j, i]))
            buf.write(",".join(row) + "\n")
    return buf.getvalue()


def curves_csv(curves: dict[str, np.ndarray]) -> str:
    buf = io.StringIO()
    buf.write("curve,piece,A,C\n")
    for name, pts in curves.items():
        piece = 0
        for a, c in pts:
            if math.isnan(a) or math.isnan(c):
                piece += 1
                continue
            buf.write(f"{name},{piece},{_fmt(a)},{_fmt(c)}\n")
    return buf.getvalue()


def _fmt(v: float) -> str:
    return format(float(v), ".17g")
