"""Plain-text run specifications: ``key = value`` lines, ``#`` comments.

Recognized keys (everything except the map selection has a default):

    map.preset = lorenz-z2          named preset (supplies B, f and a default point)
    map.point = fig4b               named point of the preset
    map.B = 0.7                     determinant; overrides the preset value
    map.f.i.j = c / f.i.j = c       coefficient of y^i z^j in f (replaces preset terms)
    params.A, params.C              parameter point (default: preset point, else 0)
    grid.A_min, grid.A_max,
    grid.C_min, grid.C_max          diagram/chart rectangle (default: point +- grid.half_width)
    grid.half_width = 0.1
    grid.W = 64, grid.H = 64        raster resolution
    grid.overlay = true             draw saddle-chart boundaries on diagrams
    grid.threads = 1
    lyapunov.<field>                any LyapunovConfig field
    trace.<field>                   any TraceConfig field
    output.dir = .                  output directory
    output.figures = true           also render PNG figures
    output.timestamp = true         record a creation time in metadata sidecars
    output.projection_size = 512    side of projection rasters, in pixels
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field, fields

from .errors import SpecFileError
from .lyapunov import LyapunovConfig
from .manifold import TraceConfig
from .mapcore import HenonMap, PolyNonlinearity
from .presets import PRESETS

_TERM = re.compile(r"^(?:map\.)?f\.(\d+)\.(\d+)$")

_GRID_KEYS = {"A_min": float, "A_max": float, "C_min": float, "C_max": float,
              "half_width": float, "W": int, "H": int, "overlay": "bool", "threads": int}
_OUTPUT_KEYS = {"dir": str, "figures": "bool", "timestamp": "bool", "projection_size": int}
_LYAP_KEYS = {f.name: f.type for f in fields(LyapunovConfig)}
_TRACE_KEYS = {f.name: f.type for f in fields(TraceConfig)}


@dataclass
class RunSpec:
    preset: str | None = None
    point: str | None = None
    B: float | None = None
    terms: dict[tuple[int, int], float] | None = None
    A: float | None = None
    C: float | None = None
    grid: dict = field(default_factory=dict)
    lyapunov: dict = field(default_factory=dict)
    trace: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)
    source: str | None = None

    # -- resolution of defaults ------------------------------------------------

    def has_map(self) -> bool:
        return self.preset is not None or self.B is not None

    def resolve_B(self) -> float:
        if self.B is not None:
            return float(self.B)
        if self.preset is not None:
            return PRESETS[self.preset].B
        raise SpecFileError("no map selected (set map.preset or map.B)", self.source)

    def nonlinearity(self) -> PolyNonlinearity:
        if self.terms is not None:
            return PolyNonlinearity(self.terms)
        if self.preset is not None:
            return PRESETS[self.preset].nonlinearity
        return PolyNonlinearity({})

    def point_AC(self) -> tuple[float, float]:
        A0 = C0 = 0.0
        if self.preset is not None:
            p = PRESETS[self.preset]
            if self.point is not None:
                if self.point not in p.points:
                    raise SpecFileError(
                        f"preset {self.preset!r} has no point {self.point!r} "
                        f"(available: {', '.join(p.points)})", self.source)
                A0, C0 = p.points[self.point]
            else:
                A0, C0 = p.default_point
        return (A0 if self.A is None else float(self.A),
                C0 if self.C is None else float(self.C))

    def henon_map(self) -> HenonMap:
        A, C = self.point_AC()
        return HenonMap(A, self.resolve_B(), C, self.nonlinearity())

    def rect(self) -> tuple[float, float, float, float]:
        A, C = self.point_AC()
        hw = float(self.grid.get("half_width", 0.1))
        return (float(self.grid.get("A_min", A - hw)), float(self.grid.get("A_max", A + hw)),
                float(self.grid.get("C_min", C - hw)), float(self.grid.get("C_max", C + hw)))

    def resolution(self) -> tuple[int, int]:
        return int(self.grid.get("W", 64)), int(self.grid.get("H", 64))

    def lyapunov_config(self) -> LyapunovConfig:
        return LyapunovConfig(**self.lyapunov)

    def trace_config(self) -> TraceConfig:
        return TraceConfig(**self.trace)


def _convert(raw: str, kind, key: str, path, lineno):
    try:
        if kind in ("bool", bool):
            low = raw.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if kind in (int, "int"):
            f = float(raw)
            if f != int(f):
                raise ValueError(raw)
            return int(f)
        if kind in (float, "float"):
            return float(raw)
        return raw
    except ValueError:
        raise SpecFileError(f"bad value {raw!r} for {key}", path, lineno) from None


def parse_spec(text: str, path: str | None = None) -> RunSpec:
    """Parse spec-file text.  Unknown keys and malformed lines raise
    SpecFileError carrying the line number."""
    spec = RunSpec(source=path)
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SpecFileError(f"expected 'key = value', got {line!r}", path, lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if not value:
            raise SpecFileError(f"missing value for {key}", path, lineno)
        m = _TERM.match(key)
        if m:
            if spec.terms is None:
                spec.terms = {}
            spec.terms[(int(m.group(1)), int(m.group(2)))] = _convert(value, float, key, path, lineno)
            continue
        section, _, name = key.partition(".")
        if key == "map.preset":
            if value not in PRESETS:
                raise SpecFileError(
                    f"unknown preset {value!r}; choose from {', '.join(PRESETS)}", path, lineno)
            spec.preset = value
        elif key == "map.point":
            spec.point = value
        elif key == "map.B":
            spec.B = _convert(value, float, key, path, lineno)
        elif key in ("params.A", "params.C"):
            setattr(spec, name, _convert(value, float, key, path, lineno))
        elif section == "grid" and name in _GRID_KEYS:
            spec.grid[name] = _convert(value, _GRID_KEYS[name], key, path, lineno)
        elif section == "lyapunov" and name in _LYAP_KEYS:
            spec.lyapunov[name] = _convert(value, _LYAP_KEYS[name], key, path, lineno)
        elif section == "trace" and name in _TRACE_KEYS:
            spec.trace[name] = _convert(value, _TRACE_KEYS[name], key, path, lineno)
        elif section == "output" and name in _OUTPUT_KEYS:
            spec.output[name] = _convert(value, _OUTPUT_KEYS[name], key, path, lineno)
        else:
            raise SpecFileError(f"unknown key {key!r}", path, lineno)
    # validate the config sections eagerly so errors surface at parse time
    for build in (spec.lyapunov_config, spec.trace_config):
        try:
            build()
        except (TypeError, ValueError) as exc:
            raise SpecFileError(str(exc), path) from None
    return spec


def read_spec(path: str) -> RunSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SpecFileError(f"cannot read spec file: {exc.strerror}", path) from None
    return parse_spec(text, path)
