"""Lyapunov diagrams over the (A, C) parameter plane.

Cells are independent: each one builds its own map, starts near O and writes
into its own slot of preallocated arrays, so the result does not depend on how
rows are scheduled across threads.  The orbit kernels release the GIL, which
makes a plain thread pool effective.
"""
from __future__ import annotations

import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import __version__
from . import _kernels as K
from .lyapunov import AttractorClass, LyapunovConfig, classify_attractor, lyapunov_spectrum
from .mapcore import HenonMap, PolyNonlinearity
from .raster import ATTRACTOR_PALETTE, colorize, draw_polylines, ppm_bytes
from .spectrum import DEFAULT_TOL, boundary_curves


@dataclass(frozen=True)
class SweepSpec:
    B: float
    nonlinearity: PolyNonlinearity
    rect: tuple[float, float, float, float]
    resolution: tuple[int, int]           # (W, H)
    lyapunov: LyapunovConfig = field(default_factory=LyapunovConfig)
    overlay: bool = True

    def __post_init__(self):
        A_min, A_max, C_min, C_max = self.rect
        if not (A_min < A_max and C_min < C_max):
            raise ValueError("rect must satisfy A_min < A_max and C_min < C_max")
        W, H = self.resolution
        if W < 1 or H < 1:
            raise ValueError("resolution must be at least 1x1")

    @property
    def cell_size(self) -> tuple[float, float]:
        A_min, A_max, C_min, C_max = self.rect
        W, H = self.resolution
        return (A_max - A_min) / W, (C_max - C_min) / H

    def centers(self) -> tuple[np.ndarray, np.ndarray]:
        A_min, _, C_min, _ = self.rect
        W, H = self.resolution
        dA, dC = self.cell_size
        return A_min + (np.arange(W) + 0.5) * dA, C_min + (np.arange(H) + 0.5) * dC

    def to_dict(self) -> dict:
        return {
            "B": self.B,
            "nonlinearity": [[i, j, c] for (i, j), c in self.nonlinearity.terms.items()],
            "rect": list(self.rect),
            "resolution": list(self.resolution),
            "lyapunov": asdict(self.lyapunov),
            "overlay": self.overlay,
        }


@dataclass(frozen=True)
class Diagram:
    spec: SweepSpec
    classes: np.ndarray       # (H, W) AttractorClass codes; [j, i]
    spectra: np.ndarray       # (H, W, 3); nan for escapes and for L3 in planar mode
    min_dist: np.ndarray      # (H, W); nan for escapes
    regions: np.ndarray       # (H, W) RegionLabel codes

    def cell(self, i: int, j: int) -> dict:
        return {
            "class": AttractorClass(int(self.classes[j, i])),
            "spectrum": tuple(self.spectra[j, i]),
            "min_distance_to_O": float(self.min_dist[j, i]),
            "region": int(self.regions[j, i]),
        }


def _run_row(spec: SweepSpec, cfg: LyapunovConfig, j: int, A: np.ndarray, C: float, out) -> None:
    classes, spectra, min_dist, regions = out
    for i, a in enumerate(A):
        m = HenonMap(float(a), spec.B, float(C), spec.nonlinearity)
        run = lyapunov_spectrum(m, cfg=cfg)
        classes[j, i] = classify_attractor(run, cfg)
        if run.spectrum is not None:
            n = len(run.spectrum)
            spectra[j, i, :n] = run.spectrum
            min_dist[j, i] = run.min_distance_to_O
        regions[j, i] = K.classify_core(float(a), spec.B, float(C), DEFAULT_TOL)[0]


def run_sweep(spec: SweepSpec, threads: int = 1) -> Diagram:
    """Compute every cell of the diagram; ``threads`` only affects speed."""
    W, H = spec.resolution
    A, C = spec.centers()
    cfg = spec.lyapunov.replace(sample_size=0)
    classes = np.zeros((H, W), dtype=np.int64)
    spectra = np.full((H, W, 3), np.nan)
    min_dist = np.full((H, W), np.nan)
    regions = np.zeros((H, W), dtype=np.int64)
    out = (classes, spectra, min_dist, regions)
    threads = max(1, int(threads))
    if threads == 1 or H == 1:
        for j in range(H):
            _run_row(spec, cfg, j, A, C[j], out)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_run_row, spec, cfg, j, A, C[j], out) for j in range(H)]
            for f in futures:
                f.result()
    return Diagram(spec, classes, spectra, min_dist, regions)


def default_threads() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def render_ppm(d: Diagram, palette: np.ndarray = ATTRACTOR_PALETTE, overlay: bool | None = None) -> bytes:
    """P6 image of the attractor classes, C decreasing from top to bottom,
    with the saddle-chart boundary curves drawn in black when ``overlay``."""
    rgb = colorize(d.classes, palette)
    if d.spec.overlay if overlay is None else overlay:
        A_min, A_max, C_min, C_max = d.spec.rect
        W, H = d.spec.resolution
        curves = boundary_curves(d.spec.B, (A_min, A_max), max(4 * W, 64), (C_min, C_max))
        draw_polylines(rgb, curves.values(), d.spec.rect)
    return ppm_bytes(rgb)


CSV_HEADER = "i,j,A,C,class_code,region_code,L1,L2,L3,sum_L,min_dist_O"


def _fmt(v: float) -> str:
    return "nan" if math.isnan(v) else format(float(v), ".17g")


def export_csv(d: Diagram) -> str:
    """One row per cell, j-major then i, 17 significant digits."""
    A, C = d.spec.centers()
    W, H = d.spec.resolution
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for j in range(H):
        for i in range(W):
            L = d.spectra[j, i]
            finite = L[~np.isnan(L)]
            total = math.fsum(finite) if finite.size else math.nan
            row = [str(i), str(j), _fmt(A[i]), _fmt(C[j]),
                   str(int(d.classes[j, i])), str(int(d.regions[j, i])),
                   _fmt(L[0]), _fmt(L[1]), _fmt(L[2]), _fmt(total), _fmt(d.min_dist[j, i])]
            buf.write(",".join(row) + "\n")
    return buf.getvalue()


def read_csv(text: str) -> list[dict]:
    """Parse export_csv output back into row dicts (codes as int, values as float)."""
    lines = text.splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError("unexpected diagram CSV header")
    names = CSV_HEADER.split(",")
    rows = []
    for line in lines[1:]:
        vals = line.split(",")
        row = {}
        for k, v in zip(names, vals):
            row[k] = int(v) if k in ("i", "j", "class_code", "region_code") else float(v)
        rows.append(row)
    return rows


def metadata(d: Diagram, timestamp: bool = True) -> dict:
    meta = {
        "software": "henon-atlas",
        "version": __version__,
        "spec": d.spec.to_dict(),
        "palette": {str(k): list(map(int, c)) for k, c in enumerate(ATTRACTOR_PALETTE)},
        "overlay_color": [0, 0, 0],
        "lyapunov_defaults": asdict(LyapunovConfig()),
        "classes": {c.name: int(c) for c in AttractorClass},
    }
    if timestamp:
        meta["created"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return meta


def metadata_json(d: Diagram, timestamp: bool = True) -> str:
    return json.dumps(metadata(d, timestamp), indent=2, sort_keys=True) + "\n"
