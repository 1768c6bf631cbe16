"""PNG figures for the CLI report path (matplotlib, Agg backend)."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402
from matplotlib.patches import Patch  # noqa: E402

from .lyapunov import AttractorClass  # noqa: E402
from .raster import ATTRACTOR_PALETTE, REGION_PALETTE  # noqa: E402
from .spectrum import RegionLabel  # noqa: E402


def _save(fig, path):
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)


def _draw_curves(ax, curves):
    for pts in curves.values():
        if len(pts):
            ax.plot(pts[:, 0], pts[:, 1], color="k", lw=0.8)


def _coded_image(ax, codes, palette, rect, names):
    cmap = ListedColormap(palette / 255.0)
    ax.imshow(codes, origin="lower", extent=rect, aspect="auto", cmap=cmap,
              vmin=-0.5, vmax=len(palette) - 0.5, interpolation="nearest")
    present = np.unique(codes)
    handles = [Patch(color=palette[k] / 255.0, label=names[k]) for k in present]
    ax.legend(handles=handles, loc="upper left", bbox_to_anchor=(1.01, 1.0), fontsize=8, frameon=False)


def diagram_figure(d, curves, path, title=None):
    A_min, A_max, C_min, C_max = d.spec.rect
    fig, ax = plt.subplots(figsize=(7, 5))
    names = [f"{int(c)} {c.name}" for c in AttractorClass]
    _coded_image(ax, d.classes, ATTRACTOR_PALETTE, d.spec.rect, names)
    if curves:
        _draw_curves(ax, curves)
    ax.set_xlim(A_min, A_max)
    ax.set_ylim(C_min, C_max)
    ax.set_xlabel("A")
    ax.set_ylabel("C")
    ax.set_title(title or f"Lyapunov diagram, B = {d.spec.B:g}")
    fig.tight_layout()
    _save(fig, path)


def chart_figure(chart, curves, path):
    A_min, A_max, C_min, C_max = chart.rect
    fig, ax = plt.subplots(figsize=(7, 5.5))
    names = [lab.name for lab in RegionLabel]
    _coded_image(ax, chart.labels, REGION_PALETTE, chart.rect, names)
    _draw_curves(ax, curves)
    ax.set_xlim(A_min, A_max)
    ax.set_ylim(C_min, C_max)
    ax.set_xlabel("A")
    ax.set_ylabel("C")
    ax.set_title(f"saddle chart, B = {chart.B:g}")
    fig.tight_layout()
    _save(fig, path)


def projection_figure(points, path, title="", line=False):
    """(x, y) projection of an orbit sample (scatter) or a separatrix (polyline)."""
    fig, ax = plt.subplots(figsize=(6, 6))
    pts = np.asarray(points)
    if len(pts):
        if line:
            ax.plot(pts[:, 0], pts[:, 1], color="k", lw=0.3)
        else:
            ax.plot(pts[:, 0], pts[:, 1], ",", color="k")
    ax.plot([0.0], [0.0], "o", color="tab:red", ms=4)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(title)
    fig.tight_layout()
    _save(fig, path)
