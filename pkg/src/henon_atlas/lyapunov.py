"""Lyapunov spectra, homoclinic proximity and attractor classes.

The tangent frame is pushed forward by the Jacobian and re-orthonormalized
(modified Gram-Schmidt) every ``renorm_period`` steps, starting with the
transient so the frame is aligned when measurement begins; the log stretches
accumulated over the measured steps, divided by their number, give the spectrum.
"""
from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _kernels as K
from .mapcore import HenonMap, State
from .spectrum import solve_characteristic


class AttractorClass(enum.IntEnum):
    Escape = 0
    Periodic = 1
    InvariantCurve = 2
    Chaos = 3
    ChaosZero2 = 4
    Hyperchaos = 5
    HomoclinicChaos = 6


@dataclass(frozen=True)
class LyapunovConfig:
    n_transient: int = 10_000
    n_measure: int = 1_000_000
    renorm_period: int = 1
    escape_radius: float = 1e5
    zero_threshold: float = 1e-3
    epsilon_homoclinic: float = 1e-4
    initial_offset: float = 1e-3
    sample_size: int = 10_000

    def __post_init__(self):
        if self.n_measure < 1:
            raise ValueError("n_measure must be >= 1")
        if self.n_transient < 0:
            raise ValueError("n_transient must be >= 0")
        if self.renorm_period < 1:
            raise ValueError("renorm_period must be >= 1")
        if not self.escape_radius > 0:
            raise ValueError("escape_radius must be > 0")
        if not self.epsilon_homoclinic > 0:
            raise ValueError("epsilon_homoclinic must be > 0")
        if self.zero_threshold < 0 or self.initial_offset < 0 or self.sample_size < 0:
            raise ValueError("zero_threshold, initial_offset and sample_size must be >= 0")

    def replace(self, **changes) -> "LyapunovConfig":
        return LyapunovConfig(**{**asdict(self), **changes})


@dataclass(frozen=True)
class LyapunovRun:
    spectrum: tuple[float, ...] | None    # descending; two values in planar (B = 0) mode
    escaped: bool
    min_distance_to_O: float
    attractor_sample: np.ndarray = field(repr=False)
    pseudohyperbolic: bool
    homoclinic: bool
    escape_step: int = -1
    n_measure: int = 0

    @property
    def spectrum_sum(self) -> float:
        return math.nan if self.spectrum is None else math.fsum(self.spectrum)

    @property
    def planar(self) -> bool:
        return self.spectrum is not None and len(self.spectrum) == 2


def pseudohyperbolic_flag(spectrum) -> bool:
    """Spectral necessary condition: L1 > 0, L1 + L2 > 0, L1 + L2 + L3 < 0."""
    if spectrum is None or len(spectrum) != 3:
        return False
    l1, l2, l3 = spectrum
    return l1 > 0.0 and l1 + l2 > 0.0 and l1 + l2 + l3 < 0.0


def unstable_eigenvector(A: float, B: float, C: float) -> np.ndarray | None:
    """Unit eigenvector of the linear part at the origin for the leading
    multiplier, if that multiplier is real and outside the unit circle."""
    lam = solve_characteristic(A, B, C).roots[0]
    if lam.imag != 0.0 or not abs(lam) > 1.0:
        return None
    lam = lam.real
    v = np.array([1.0, lam, lam * lam])
    return v / np.linalg.norm(v)


def default_initial_state(m: HenonMap, cfg: LyapunovConfig) -> State:
    d = cfg.initial_offset
    v = unstable_eigenvector(m.A, m.B, m.C)
    if v is None:
        return State(d, d, d)
    return State(*(d * v))


def lyapunov_spectrum(m: HenonMap, x0: State | None = None,
                      cfg: LyapunovConfig = LyapunovConfig(),
                      frame: np.ndarray | None = None) -> LyapunovRun:
    """Lyapunov spectrum of the orbit of ``x0`` (default: near the origin).

    ``frame`` is the initial orthonormal tangent frame (identity by default).
    For B = 0 the orbit lives on the (y, z) plane and two exponents are
    returned.
    """
    if x0 is None:
        x0 = default_initial_state(m, cfg)
    ei, ej, co = m.nonlinearity.arrays()
    planar = m.B == 0.0
    dim = 2 if planar else 3
    Q0 = np.eye(dim) if frame is None else np.array(frame, dtype=float)
    if Q0.shape != (dim, dim):
        raise ValueError(f"frame must be {dim}x{dim}")
    if planar:
        escaped, esc_step, sums, dmin, sample, filled = K.lyapunov2(
            m.A, m.C, ei, ej, co, float(x0.y), float(x0.z), Q0,
            cfg.n_transient, cfg.n_measure, cfg.renorm_period,
            cfg.escape_radius, cfg.sample_size)
    else:
        escaped, esc_step, sums, dmin, sample, filled = K.lyapunov3(
            m.A, m.B, m.C, ei, ej, co, x0.as_array(), Q0,
            cfg.n_transient, cfg.n_measure, cfg.renorm_period,
            cfg.escape_radius, cfg.sample_size)
    if escaped:
        return LyapunovRun(None, True, math.nan, np.empty((0, 3)), False, False,
                           int(esc_step), cfg.n_measure)
    spectrum = tuple(sorted((float(s) / cfg.n_measure for s in sums), reverse=True))
    dmin = float(dmin)
    homoclinic = spectrum[0] > cfg.zero_threshold and dmin < cfg.epsilon_homoclinic
    return LyapunovRun(
        spectrum=spectrum,
        escaped=False,
        min_distance_to_O=dmin,
        attractor_sample=sample[:filled].copy(),
        pseudohyperbolic=pseudohyperbolic_flag(spectrum),
        homoclinic=homoclinic,
        n_measure=cfg.n_measure,
    )


def classify_attractor(run: LyapunovRun, cfg: LyapunovConfig = LyapunovConfig()) -> AttractorClass:
    if run.escaped or run.spectrum is None:
        return AttractorClass.Escape
    zt = cfg.zero_threshold
    l1 = run.spectrum[0]
    if l1 < -zt:
        return AttractorClass.Periodic
    if abs(l1) <= zt:
        return AttractorClass.InvariantCurve
    if run.min_distance_to_O < cfg.epsilon_homoclinic:
        return AttractorClass.HomoclinicChaos
    l2 = run.spectrum[1]
    if l2 > zt:
        return AttractorClass.Hyperchaos
    if abs(l2) <= zt:
        return AttractorClass.ChaosZero2
    return AttractorClass.Chaos


def log_det(m: HenonMap) -> float | None:
    """ln|det J| when the Jacobian determinant is constant, else None.

    In 3D it is ln|B|; in the planar limit it is ln|C| provided the
    nonlinearity does not depend on y.
    """
    if m.B != 0.0:
        return math.log(abs(m.B))
    if m.C != 0.0 and all(i == 0 for i, _ in m.nonlinearity.terms):
        return math.log(abs(m.C))
    return None


def run_report(m: HenonMap, run: LyapunovRun, cfg: LyapunovConfig, label: str | None = None) -> dict:
    """JSON-ready summary of one run."""
    cls = classify_attractor(run, cfg)
    det = log_det(m)
    residual = None if run.spectrum is None or det is None else run.spectrum_sum - det
    return {
        "map": {
            "name": label,
            "A": m.A,
            "B": m.B,
            "C": m.C,
            "nonlinearity": m.nonlinearity.describe(),
            "terms": [[i, j, c] for (i, j), c in m.nonlinearity.terms.items()],
        },
        "config": asdict(cfg),
        "spectrum": None if run.spectrum is None else list(run.spectrum),
        "spectrum_sum": None if run.spectrum is None else run.spectrum_sum,
        "sum_minus_log_det": residual,
        "min_distance_to_O": None if run.escaped else run.min_distance_to_O,
        "escaped": run.escaped,
        "escape_step": run.escape_step if run.escaped else None,
        "pseudohyperbolic": run.pseudohyperbolic,
        "homoclinic": run.homoclinic,
        "class_code": int(cls),
        "class_name": cls.name,
    }
