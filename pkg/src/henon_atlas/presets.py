"""Catalog of maps and parameter points studied in the attractor atlas.

Coefficients are stored exactly as published; ``points`` holds the named
(A, C) parameter pairs at which each attractor was reported.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .mapcore import HenonMap, PolyNonlinearity, RawHenonMap, RawPolynomial, henon2d_normalize


@dataclass(frozen=True)
class Preset:
    name: str
    B: float
    nonlinearity: PolyNonlinearity
    points: dict[str, tuple[float, float]] = field(default_factory=dict)
    description: str = ""

    @property
    def default_point(self) -> tuple[float, float]:
        return next(iter(self.points.values()))

    def at(self, A: float | None = None, C: float | None = None) -> HenonMap:
        A0, C0 = self.default_point
        return HenonMap(A0 if A is None else A, self.B, C0 if C is None else C, self.nonlinearity)

    @property
    def two_dimensional(self) -> bool:
        return self.B == 0.0


def _poly(**terms: float) -> PolyNonlinearity:
    # keys like y2, z3, y1z1
    parsed = {}
    for key, c in terms.items():
        i = j = 0
        rest = key
        if rest.startswith("y"):
            num = ""
            rest = rest[1:]
            while rest and rest[0].isdigit():
                num, rest = num + rest[0], rest[1:]
            i = int(num or 1)
        if rest.startswith("z"):
            j = int(rest[1:] or 1)
        parsed[(i, j)] = c
    return PolyNonlinearity(parsed)


_HENON_A = henon2d_normalize(1.4, 0.3)[0]

PRESETS: dict[str, Preset] = {
    p.name: p
    for p in [
        Preset(
            "lorenz-z2", 0.7, _poly(z2=-1.0),
            {"fig4b": (-1.1, 0.85), "fig4d": (-1.11, 0.77)},
            "discrete Lorenz attractor, f = -z^2",
        ),
        Preset(
            "fig8-quad", 0.72, _poly(y2=-1.0, y1z1=0.515, z2=-1.45),
            {"fig5": (-1.86, 0.03)},
            "discrete figure-8 attractor",
        ),
        Preset(
            "double-fig8", 0.5, _poly(y3=-2.0, z3=-2.25),
            {"fig6": (0.82, 2.06)},
            "discrete double figure-8 attractor",
        ),
        Preset(
            "super-fig8", 0.05, _poly(y3=1.0, z3=-1.0),
            {"fig7": (3.71, -2.75)},
            "discrete super figure-8 attractor",
        ),
        Preset(
            "fig8-quasi", 0.7, _poly(y2=-1.0, z2=-1.45),
            {"fig8": (-1.86, 0.03)},
            "discrete figure-8 quasiattractor",
        ),
        Preset(
            "book-cubic", 0.5, _poly(y3=-1.0),
            {"fig10b": (0.13, 1.72), "fig10c": (-0.75, 1.5)},
            "homoclinic attractors with two-dimensional unstable manifold",
        ),
        Preset(
            "spiral-cubic", 0.5, _poly(y3=0.5, y2z1=-6.0, z3=0.5),
            {"fig11": (2.13, -1.29)},
            "spiral quasiattractor (saddle-focus (2,1))",
        ),
        Preset(
            "shilnikov-quad", 0.5, _poly(y2=-1.0),
            {"fig12": (1.43, -1.84)},
            "discrete Shilnikov attractor (saddle-focus (1,2))",
        ),
        Preset(
            "henon2d", 0.0, _poly(z2=-1.0),
            {"henon-1976": (_HENON_A, 0.3), "henon-a": (-1.92, -0.4)},
            "two-dimensional Henon map y' = z, z' = A z + C y - z^2",
        ),
    ]
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(
            f"unknown preset {name!r}; choose from {', '.join(PRESETS)}"
        ) from None


def raw_henon3d(M1: float, M2: float, B: float) -> RawHenonMap:
    """x' = y, y' = z, z' = M1 + M2 y + B x - z^2."""
    return RawHenonMap(B, RawPolynomial({(0, 0): M1, (1, 0): M2, (0, 2): -1.0}))


def raw_henon2d(M: float, C: float) -> RawHenonMap:
    """Standard 2D Henon map y' = z, z' = M + C y - z^2 embedded with B = 0."""
    return RawHenonMap(0.0, RawPolynomial({(0, 0): M, (1, 0): C, (0, 2): -1.0}))
