"""One-dimensional separatrices of the origin and homoclinic proximity.

A separatrix is grown from a fundamental segment on the eigenline.  Every
curve point is the image of a seed parameter ``u`` in [0, 1] under a known
number of map applications, so refinement inserts new seed parameters and
recomputes their images instead of interpolating chords.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _kernels as K
from .errors import NoStableDirection, NotInvertible, NoUnstableDirection, WrongSplitting
from .mapcore import HenonMap, State
from .spectrum import solve_characteristic


@dataclass(frozen=True)
class TraceConfig:
    initial_offset: float = 1e-6
    seed_points: int = 64
    h_max: float = 1e-2
    max_points: int = 1_000_000
    trace_radius: float = 1e3
    direction: int = 1

    def __post_init__(self):
        if not (self.initial_offset > 0 and self.h_max > 0 and self.trace_radius > 0):
            raise ValueError("initial_offset, h_max and trace_radius must be > 0")
        if self.seed_points < 2:
            raise ValueError("seed_points must be >= 2")
        if self.max_points < self.seed_points:
            raise ValueError("max_points must be >= seed_points")
        if self.direction not in (1, -1):
            raise ValueError("direction must be +1 or -1")

    def replace(self, **changes) -> "TraceConfig":
        return TraceConfig(**{**asdict(self), **changes})


@dataclass(frozen=True)
class SeparatrixCurve:
    points: np.ndarray = field(repr=False)       # (N, 3)
    arclength: np.ndarray = field(repr=False)    # (N,)
    generation: np.ndarray = field(repr=False)   # (N,) map applications from the seed segment
    multiplier: float = math.nan
    period: int = 1                              # map applications per generation
    stable: bool = False
    exited: bool = False
    unresolved_gaps: int = 0                     # gaps left above h_max at float resolution

    def __len__(self) -> int:
        return len(self.points)

    @property
    def states(self) -> list[State]:
        return [State(*p) for p in self.points]


def _eigenvector(lam: float) -> np.ndarray:
    # companion matrix eigenvector for multiplier lam
    v = np.array([1.0, lam, lam * lam])
    return v / np.linalg.norm(v)


def unstable_direction(m: HenonMap) -> tuple[np.ndarray, float]:
    """Unit eigenvector and multiplier of the single real unstable multiplier."""
    ms = solve_characteristic(m.A, m.B, m.C)
    unstable = [z for z in ms.roots if abs(z) > 1.0]
    if len(unstable) != 1 or unstable[0].imag != 0.0:
        raise NoUnstableDirection(
            f"origin at A={m.A!r}, B={m.B!r}, C={m.C!r} has {len(unstable)} unstable "
            "multiplier(s); a single real one is required")
    lam = unstable[0].real
    return _eigenvector(lam), lam


def stable_direction(m: HenonMap) -> tuple[np.ndarray, float]:
    """Unit eigenvector and multiplier of the single real stable multiplier
    when the other two are unstable."""
    ms = solve_characteristic(m.A, m.B, m.C)
    stable = [z for z in ms.roots if abs(z) < 1.0]
    if len(stable) != 1 or stable[0].imag != 0.0 or ms.unstable_count != 2:
        raise NoStableDirection(
            f"origin at A={m.A!r}, B={m.B!r}, C={m.C!r} is not a (1,2) saddle")
    lam = stable[0].real
    return _eigenvector(lam), lam


def _trace(m: HenonMap, v: np.ndarray, lam: float, cfg: TraceConfig, inverse: bool) -> SeparatrixCurve:
    ei, ej, co = m.nonlinearity.arrays()
    # multiplier of the map being iterated; a negative one swaps branches, so use T^2
    mu = 1.0 / lam if inverse else lam
    period = 1 if mu > 0 else 2
    factor = abs(mu) ** period
    log_factor = math.log(factor)
    base = cfg.direction * cfg.initial_offset * v

    def seed(u):
        s = np.exp(np.asarray(u) * log_factor)
        return s[:, None] * base[None, :]

    def advance(pts, n):
        return K.map_points(m.A, m.B, m.C, ei, ej, co, np.ascontiguousarray(pts), n, inverse)

    h2 = cfg.h_max ** 2
    chunks, gens = [], []
    total = 0
    unresolved = 0
    exited = False
    u = np.linspace(0.0, 1.0, cfg.seed_points)
    pts = seed(u)
    k = 0
    while True:
        n_steps = period * k
        # bisect the seed segment wherever consecutive images are too far apart
        while True:
            d2 = np.sum(np.diff(pts, axis=0) ** 2, axis=1)
            bad = d2 > h2                   # NaN gaps (escaped points) are never refined
            if not bad.any():
                break
            idx = np.nonzero(bad)[0]
            du = u[idx + 1] - u[idx]
            ok = du > 4.0 * np.spacing(u[idx + 1])
            unresolved_here = int(np.count_nonzero(~ok))
            idx = idx[ok]
            if idx.size == 0:
                unresolved += unresolved_here
                break
            if total + len(u) + idx.size > cfg.max_points:
                idx = idx[: max(cfg.max_points - total - len(u), 0)]
                if idx.size == 0:
                    break
            u_new = 0.5 * (u[idx] + u[idx + 1])
            p_new = advance(seed(u_new), n_steps)
            u = np.insert(u, idx + 1, u_new)
            pts = np.insert(pts, idx + 1, p_new, axis=0)
        r2 = np.sum(pts ** 2, axis=1)
        outside = ~(r2 <= cfg.trace_radius ** 2)
        if outside.any():
            cut = int(np.argmax(outside))
            pts, u = pts[:cut], u[:cut]
            exited = True
        # the first point of a later generation repeats the last point of the
        # previous one (up to the O(delta^2) linearization error)
        keep = pts if k == 0 else pts[1:]
        room = cfg.max_points - total
        if len(keep) > room:
            keep = keep[:room]
        chunks.append(keep)
        gens.append(np.full(len(keep), n_steps, dtype=np.int64))
        total += len(keep)
        if exited or total >= cfg.max_points:
            break
        pts = advance(pts, period)
        k += 1

    points = np.concatenate(chunks) if chunks else np.empty((0, 3))
    generation = np.concatenate(gens) if gens else np.empty(0, dtype=np.int64)
    seg = np.sqrt(np.sum(np.diff(points, axis=0) ** 2, axis=1))
    arclength = np.concatenate(([0.0], np.cumsum(seg))) if len(points) else np.empty(0)
    return SeparatrixCurve(points, arclength, generation, lam, period, inverse, exited, unresolved)


def trace_separatrix(m: HenonMap, cfg: TraceConfig = TraceConfig()) -> SeparatrixCurve:
    """Trace one branch of the unstable manifold of the origin.

    The fundamental segment runs from ``initial_offset`` to
    ``|lambda_1| * initial_offset`` along the eigenline.  For a negative
    multiplier one application of the map swaps the branches, so the branch
    is grown with the second iterate from the segment up to
    ``lambda_1**2 * initial_offset``.
    """
    v, lam = unstable_direction(m)
    return _trace(m, v, lam, cfg, inverse=False)


def trace_stable_separatrix(m: HenonMap, cfg: TraceConfig = TraceConfig()) -> SeparatrixCurve:
    """Trace one branch of the one-dimensional stable manifold with the inverse map."""
    if m.B == 0.0:
        raise NotInvertible("the map is not invertible for B = 0")
    v, lam = stable_direction(m)
    return _trace(m, v, lam, cfg, inverse=True)


def stable_plane_normal(m: HenonMap) -> np.ndarray:
    """Unit normal of the two-dimensional stable eigenspace of the origin.

    The stable plane is the invariant subspace complementary to the unstable
    eigenvector, so its normal is the left eigenvector for the unstable
    multiplier lam: (B/lam, (B/lam + C)/lam, 1).  This is the same plane as
    the span of the real and imaginary parts of a complex stable eigenvector.
    """
    ms = solve_characteristic(m.A, m.B, m.C)
    stable = [z for z in ms.roots if abs(z) < 1.0]
    unstable = [z for z in ms.roots if abs(z) >= 1.0]
    if len(stable) != 2 or len(unstable) != 1 or unstable[0].imag != 0.0:
        raise WrongSplitting(
            f"stable eigenspace at A={m.A!r}, B={m.B!r}, C={m.C!r} is "
            f"{len(stable)}-dimensional")
    lam = unstable[0].real
    w1 = m.B / lam
    n = np.array([w1, (w1 + m.C) / lam, 1.0])
    return n / np.linalg.norm(n)


def stable_plane_distance(m: HenonMap, p) -> float:
    """Distance from ``p`` to the linear stable plane of the origin."""
    n = stable_plane_normal(m)
    return float(abs(np.dot(n, np.asarray(tuple(p), dtype=float))))


def _after_departure(curve: SeparatrixCurve, leave_radius: float) -> np.ndarray:
    r = np.linalg.norm(curve.points, axis=1)
    far = np.nonzero(r > leave_radius)[0]
    if far.size == 0:
        return np.empty((0, 3))
    return curve.points[far[0]:]


def min_return_distance(curve: SeparatrixCurve, leave_radius: float = 0.1) -> float:
    """Closest approach to O after the curve first leaves the ball of radius
    ``leave_radius`` (the local piece near O is excluded).  inf if it never leaves."""
    pts = _after_departure(curve, leave_radius)
    if len(pts) == 0:
        return math.inf
    return float(np.min(np.linalg.norm(pts, axis=1)))


def min_stable_plane_distance(m: HenonMap, curve: SeparatrixCurve, leave_radius: float = 0.1) -> float:
    """Closest approach to the linear stable plane among returning points.

    Only points that come back inside the ball of radius ``leave_radius``
    after the curve first left it are used; far from O the plane is not an
    approximation of the stable manifold and any crossing would count.
    """
    pts = _after_departure(curve, leave_radius)
    pts = pts[np.linalg.norm(pts, axis=1) <= leave_radius]
    if len(pts) == 0:
        return math.inf
    n = stable_plane_normal(m)
    return float(np.min(np.abs(pts @ n)))


def curve_csv(curve: SeparatrixCurve) -> str:
    lines = ["index,generation,x,y,z,arclength"]
    for i, (p, g, s) in enumerate(zip(curve.points, curve.generation, curve.arclength)):
        lines.append(f"{i},{g},{p[0]:.17g},{p[1]:.17g},{p[2]:.17g},{s:.17g}")
    return "\n".join(lines) + "\n"
