"""Binary PPM output, palettes, polyline overlay and point-density projections."""
from __future__ import annotations

import numpy as np

# attractor classes 0..6
ATTRACTOR_PALETTE = np.array([
    (255, 255, 255),   # 0 escape
    (0, 160, 0),       # 1 periodic
    (120, 200, 255),   # 2 invariant curve
    (255, 220, 0),     # 3 chaos
    (220, 0, 0),       # 4 chaos with zero second exponent
    (0, 0, 140),       # 5 hyperchaos
    (80, 80, 80),      # 6 homoclinic chaos
], dtype=np.uint8)

# region labels 0..14, in RegionLabel order
REGION_PALETTE = np.array([
    (0, 160, 0),       # Stable
    (230, 90, 90),     # LA
    (250, 190, 190),   # LQA
    (80, 120, 230),    # A8
    (180, 200, 250),   # QA8
    (230, 150, 30),    # D8A
    (250, 215, 160),   # D8QA
    (150, 60, 200),    # S8A
    (215, 180, 235),   # S8QA
    (60, 190, 190),    # SpiralPoint
    (190, 190, 60),    # ShilnikovPoint
    (170, 170, 170),   # Saddle12Real
    (120, 120, 120),   # Saddle21Mixed
    (255, 255, 255),   # Repeller
    (0, 0, 0),         # OnBoundary
], dtype=np.uint8)

OVERLAY_COLOR = (0, 0, 0)


def ppm_bytes(rgb: np.ndarray) -> bytes:
    """Encode an (H, W, 3) uint8 image as binary PPM (P6, maxval 255)."""
    rgb = np.ascontiguousarray(rgb, dtype=np.uint8)
    H, W, _ = rgb.shape
    return f"P6\n{W} {H}\n255\n".encode("ascii") + rgb.tobytes()


def read_ppm(data: bytes) -> np.ndarray:
    parts = data.split(maxsplit=4)
    if parts[0] != b"P6":
        raise ValueError("not a binary PPM")
    W, H = int(parts[1]), int(parts[2])
    pix = np.frombuffer(parts[4][: W * H * 3], dtype=np.uint8)
    return pix.reshape(H, W, 3)


def colorize(codes: np.ndarray, palette: np.ndarray) -> np.ndarray:
    """Palette lookup for an (H, W) code grid stored with row j = C index
    (increasing); the image is flipped so C decreases top to bottom."""
    return palette[np.asarray(codes)[::-1]]


def draw_polylines(rgb: np.ndarray, polylines, rect, color=OVERLAY_COLOR) -> np.ndarray:
    """Rasterize (N, 2) (A, C) polylines with NaN breaks onto an image
    whose row 0 is C_max.  Modifies and returns ``rgb``."""
    H, W, _ = rgb.shape
    A_min, A_max, C_min, C_max = rect
    sx = W / (A_max - A_min)
    sy = H / (C_max - C_min)
    for pts in polylines:
        pts = np.asarray(pts, dtype=float)
        if len(pts) < 2:
            continue
        px = (pts[:, 0] - A_min) * sx
        py = (C_max - pts[:, 1]) * sy
        for k in range(len(pts) - 1):
            x0, y0, x1, y1 = px[k], py[k], px[k + 1], py[k + 1]
            if not np.isfinite([x0, y0, x1, y1]).all():
                continue
            # skip segments entirely outside the image
            if max(x0, x1) < 0 or min(x0, x1) >= W or max(y0, y1) < 0 or min(y0, y1) >= H:
                continue
            x0c, x1c = np.clip([x0, x1], -1, W + 1)
            y0c, y1c = np.clip([y0, y1], -1, H + 1)
            n = int(np.ceil(2 * max(abs(x1c - x0c), abs(y1c - y0c)))) + 1
            t = np.linspace(0.0, 1.0, n)
            xs = np.floor(x0c + t * (x1c - x0c)).astype(np.int64)
            ys = np.floor(y0c + t * (y1c - y0c)).astype(np.int64)
            ok = (xs >= 0) & (xs < W) & (ys >= 0) & (ys < H)
            rgb[ys[ok], xs[ok]] = color
    return rgb


def density_projection(points: np.ndarray, axes=(0, 1), size=(512, 512), pad=0.05) -> np.ndarray:
    """Log point-density image (H, W, 3) of a point cloud projected on two
    coordinate axes; white background, dark where points accumulate."""
    W, H = size
    rgb = np.full((H, W, 3), 255, dtype=np.uint8)
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or len(pts) == 0:
        return rgb
    pts = pts[np.isfinite(pts).all(axis=1)]
    if len(pts) == 0:
        return rgb
    u, v = pts[:, axes[0]], pts[:, axes[1]]
    u0, u1 = u.min(), u.max()
    v0, v1 = v.min(), v.max()
    du = (u1 - u0) or 1.0
    dv = (v1 - v0) or 1.0
    u0, u1 = u0 - pad * du, u1 + pad * du
    v0, v1 = v0 - pad * dv, v1 + pad * dv
    counts, _, _ = np.histogram2d(v, u, bins=(H, W), range=((v0, v1), (u0, u1)))
    counts = counts[::-1]
    shade = np.log1p(counts)
    if shade.max() > 0:
        shade /= shade.max()
    level = np.where(counts > 0, 200 - 200 * shade, 255).astype(np.uint8)
    rgb[...] = level[..., None]
    return rgb
