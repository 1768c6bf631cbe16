"""Generalized 3D Henon maps with the saddle fixed point at the origin.

The family is

    x' = y,   y' = z,   z' = B*x + A*z + C*y + f(y, z)

where ``f`` is a polynomial without constant or linear part, so the origin
is always a fixed point and the Jacobian determinant is identically ``B``.
Maps written with an arbitrary polynomial (``z' = B*x + f(y, z)``) are
:class:`RawHenonMap` instances and are brought to this form by
:func:`diagonal_fixed_points` followed by :func:`shift_to_origin`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import comb
from types import MappingProxyType
from typing import Iterator, Mapping

import numpy as np

from .errors import (
    DegenerateFamily,
    Escape,
    NoRealFixedPoints,
    NotAFixedPoint,
    NotInvertible,
    SingularLinearPart,
)

FIXED_POINT_TOL = 1e-10


@dataclass(frozen=True, slots=True)
class State:
    x: float
    y: float
    z: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.z)):
            raise ValueError(f"non-finite state ({self.x}, {self.y}, {self.z})")

    def __iter__(self) -> Iterator[float]:
        yield self.x
        yield self.y
        yield self.z

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)


ORIGIN = State(0.0, 0.0, 0.0)


def _ipow(v, n: int):
    # repeated multiplication overflows to inf instead of raising like float.__pow__
    r = 1.0
    for _ in range(n):
        r = r * v
    return r


class _Polynomial:
    """Sparse bivariate polynomial ``sum c * y**i * z**j``.

    Works on floats and on numpy arrays alike.
    """

    min_degree = 0

    def __init__(self, terms: Mapping[tuple[int, int], float] | None = None):
        clean: dict[tuple[int, int], float] = {}
        for key, coeff in (terms or {}).items():
            i, j = (int(k) for k in key)
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent in term {key}")
            if i + j < self.min_degree:
                raise ValueError(
                    f"term y^{i} z^{j} has degree {i + j} < {self.min_degree}"
                )
            coeff = float(coeff)
            if not math.isfinite(coeff):
                raise ValueError(f"non-finite coefficient for term {key}")
            if coeff != 0.0:
                clean[(i, j)] = clean.get((i, j), 0.0) + coeff
        self._terms = MappingProxyType(dict(sorted(clean.items())))

    @property
    def terms(self) -> Mapping[tuple[int, int], float]:
        return self._terms

    @property
    def degree(self) -> int:
        return max((i + j for i, j in self._terms), default=0)

    def __call__(self, y, z):
        total = 0.0 * y + 0.0 * z
        for (i, j), c in self._terms.items():
            total = total + c * _ipow(y, i) * _ipow(z, j)
        return total

    def gradient(self, y, z):
        """Return ``(df/dy, df/dz)``."""
        dy = 0.0 * y + 0.0 * z
        dz = 0.0 * y + 0.0 * z
        for (i, j), c in self._terms.items():
            if i:
                dy = dy + c * i * _ipow(y, i - 1) * _ipow(z, j)
            if j:
                dz = dz + c * j * _ipow(y, i) * _ipow(z, j - 1)
        return dy, dz

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Exponent and coefficient arrays for the compiled kernels."""
        keys = list(self._terms)
        ei = np.array([k[0] for k in keys], dtype=np.int64)
        ej = np.array([k[1] for k in keys], dtype=np.int64)
        co = np.array([self._terms[k] for k in keys], dtype=np.float64)
        return ei, ej, co

    def describe(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (i, j), c in sorted(self._terms.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), kv[0])):
            mono = "*".join(
                s for s in (
                    ("y" if i == 1 else f"y^{i}") if i else "",
                    ("z" if j == 1 else f"z^{j}") if j else "",
                ) if s
            )
            coeff = repr(c)
            parts.append(f"{coeff}*{mono}" if mono else coeff)
        return " + ".join(parts).replace("+ -", "- ")

    def __eq__(self, other):
        if not isinstance(other, _Polynomial):
            return NotImplemented
        return type(self) is type(other) and dict(self._terms) == dict(other._terms)

    def __hash__(self):
        return hash((type(self).__name__, tuple(self._terms.items())))

    def __repr__(self):
        return f"{type(self).__name__}({dict(self._terms)!r})"


class PolyNonlinearity(_Polynomial):
    """Nonlinear part f~(y, z): every term has total degree >= 2."""

    min_degree = 2


class RawPolynomial(_Polynomial):
    """Polynomial f(y, z) that may carry constant and linear terms."""

    min_degree = 0


@dataclass(frozen=True)
class HenonMap:
    A: float
    B: float
    C: float
    nonlinearity: PolyNonlinearity = field(default_factory=PolyNonlinearity)

    def __post_init__(self):
        for name in ("A", "B", "C"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, value)
        if not isinstance(self.nonlinearity, PolyNonlinearity):
            object.__setattr__(self, "nonlinearity", PolyNonlinearity(self.nonlinearity))

    @property
    def linear_part(self) -> np.ndarray:
        return np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [self.B, self.C, self.A]])

    def with_params(self, A: float, C: float) -> "HenonMap":
        return HenonMap(A, self.B, C, self.nonlinearity)


@dataclass(frozen=True)
class RawHenonMap:
    B: float
    f: RawPolynomial

    def __post_init__(self):
        object.__setattr__(self, "B", float(self.B))
        if not math.isfinite(self.B):
            raise ValueError("B must be finite")
        if not isinstance(self.f, RawPolynomial):
            object.__setattr__(self, "f", RawPolynomial(self.f))


def _image(m: HenonMap, x, y, z):
    return y, z, m.B * x + m.A * z + m.C * y + m.nonlinearity(y, z)


def step(m: HenonMap, s: State) -> State:
    """Apply the map once; raises :class:`Escape` on overflow."""
    x, y, z = _image(m, s.x, s.y, s.z)
    if not math.isfinite(z):
        raise Escape(f"image of {s} is not finite")
    return State(x, y, z)


def step_array(m: HenonMap, pts: np.ndarray) -> np.ndarray:
    """Vectorized :func:`step` over an ``(N, 3)`` array; no escape checks."""
    pts = np.asarray(pts, dtype=float)
    out = np.empty_like(pts)
    with np.errstate(over="ignore", invalid="ignore"):
        out[:, 0], out[:, 1], out[:, 2] = _image(m, pts[:, 0], pts[:, 1], pts[:, 2])
    return out


def jacobian(m: HenonMap, s: State) -> np.ndarray:
    fy, fz = m.nonlinearity.gradient(s.y, s.z)
    return np.array(
        [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [m.B, m.C + fy, m.A + fz]]
    )


def inverse_step(m: HenonMap, s: State) -> State:
    if m.B == 0.0:
        raise NotInvertible("B = 0: the map is not invertible")
    x, y, z = _inverse_image(m, s.x, s.y, s.z)
    if not math.isfinite(x):
        raise Escape(f"preimage of {s} is not finite")
    return State(x, y, z)


def _inverse_image(m: HenonMap, xb, yb, zb):
    x = (zb - m.A * yb - m.C * xb - m.nonlinearity(xb, yb)) / m.B
    return x, xb, yb


def inverse_step_array(m: HenonMap, pts: np.ndarray) -> np.ndarray:
    if m.B == 0.0:
        raise NotInvertible("B = 0: the map is not invertible")
    pts = np.asarray(pts, dtype=float)
    out = np.empty_like(pts)
    with np.errstate(over="ignore", invalid="ignore"):
        out[:, 0], out[:, 1], out[:, 2] = _inverse_image(m, pts[:, 0], pts[:, 1], pts[:, 2])
    return out


def _diagonal_coefficients(raw: RawHenonMap) -> np.ndarray:
    """Coefficients (highest degree first) of g(t) = f(t, t) + (B - 1) t."""
    degree = max(raw.f.degree, 1)
    coeffs = np.zeros(degree + 1)
    for (i, j), c in raw.f.terms.items():
        coeffs[degree - (i + j)] += c
    coeffs[degree - 1] += raw.B - 1.0
    return coeffs


def diagonal_fixed_points(raw: RawHenonMap) -> list[float]:
    """Real fixed points (t, t, t) of a raw map, sorted ascending.

    Fixed points of x' = y, y' = z, z' = Bx + f(y, z) lie on the diagonal
    and solve t = B t + f(t, t).
    """
    coeffs = _diagonal_coefficients(raw)
    nz = np.flatnonzero(coeffs)
    if nz.size == 0:
        raise DegenerateFamily("every diagonal point is fixed")
    coeffs = coeffs[nz[0]:]
    if coeffs.size == 1:
        return []
    dpoly = np.polyder(coeffs)
    scale = max(1.0, float(np.max(np.abs(coeffs))))
    roots: list[float] = []
    for r in np.roots(coeffs):
        if abs(r.imag) > 1e-6 * max(1.0, abs(r.real)):
            continue
        t = float(r.real)
        for _ in range(50):
            g = np.polyval(coeffs, t)
            dg = np.polyval(dpoly, t)
            if dg == 0.0 or abs(g) < 1e-15 * scale:
                break
            t_new = t - g / dg
            if t_new == t:
                break
            t = t_new
        if abs(np.polyval(coeffs, t)) < FIXED_POINT_TOL:
            roots.append(t)
    roots.sort()
    unique: list[float] = []
    for t in roots:
        if not unique or abs(t - unique[-1]) > 1e-9 * max(1.0, abs(t)):
            unique.append(t)
    return unique


def shift_to_origin(raw: RawHenonMap, zeta: float) -> HenonMap:
    """Move the diagonal fixed point (zeta, zeta, zeta) to the origin."""
    residual = raw.B * zeta + raw.f(zeta, zeta) - zeta
    if not abs(residual) < FIXED_POINT_TOL * max(1.0, abs(zeta)):
        raise NotAFixedPoint(f"zeta={zeta!r} has residual {residual:.3e}")
    # f(zeta + u, zeta + v) expanded by the binomial theorem
    shifted: dict[tuple[int, int], float] = {}
    for (i, j), c in raw.f.terms.items():
        for a in range(i + 1):
            ca = c * comb(i, a) * zeta ** (i - a)
            for b in range(j + 1):
                key = (a, b)
                shifted[key] = shifted.get(key, 0.0) + ca * comb(j, b) * zeta ** (j - b)
    C = shifted.pop((1, 0), 0.0)
    A = shifted.pop((0, 1), 0.0)
    shifted.pop((0, 0), None)
    return HenonMap(A, raw.B, C, PolyNonlinearity(shifted))


def henon2d_normalize(M: float, C: float) -> tuple[float, float, tuple[float, float]]:
    """Bring y' = z, z' = M + C y - z^2 to z' = A z + C y - z^2.

    Returns ``(A, C, (y_plus, y_minus))`` with ``A = -2 y_plus``.
    """
    D = (C - 1.0) ** 2 + 4.0 * M
    if not D > 0.0:
        raise NoRealFixedPoints(f"D = (C-1)^2 + 4M = {D!r} <= 0")
    root = math.sqrt(D)
    y_plus = 0.5 * (C - 1.0 + root)
    y_minus = 0.5 * (C - 1.0 - root)
    return -2.0 * y_plus, C, (y_plus, y_minus)


def companion_params(D) -> tuple[float, float, float]:
    """(A, B, C) of the companion matrix with the same characteristic polynomial as D."""
    D = np.asarray(D, dtype=float)
    if D.shape != (3, 3):
        raise ValueError("expected a 3x3 matrix")
    det = float(
        D[0, 0] * (D[1, 1] * D[2, 2] - D[1, 2] * D[2, 1])
        - D[0, 1] * (D[1, 0] * D[2, 2] - D[1, 2] * D[2, 0])
        + D[0, 2] * (D[1, 0] * D[2, 1] - D[1, 1] * D[2, 0])
    )
    if abs(det) <= 1e-14 * max(1.0, float(np.abs(D).max())) ** 3:
        raise SingularLinearPart("det(D) = 0")
    minors = (
        D[0, 0] * D[1, 1] - D[0, 1] * D[1, 0]
        + D[0, 0] * D[2, 2] - D[0, 2] * D[2, 0]
        + D[1, 1] * D[2, 2] - D[1, 2] * D[2, 1]
    )
    return float(np.trace(D)), det, -float(minors)
