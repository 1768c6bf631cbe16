"""Independent reference computations used by several test modules."""
import numpy as np


def numpy_roots(A, B, C):
    """Roots of l^3 - A l^2 - C l - B via the companion eigenvalues."""
    return np.roots([1.0, -A, -C, -B])


def root_based_region(A, B, C):
    """'LA', 'A8' or None, decided directly from numpy roots (sigma > 1 cases only)."""
    r = numpy_roots(A, B, C)
    if np.any(np.abs(r.imag) > 1e-12):
        return None
    r = np.sort(r.real)[::-1]
    r = r[np.argsort(-np.abs(r), kind="stable")]
    l1, l2, l3 = r
    if not (abs(l1) > 1 > abs(l2) >= abs(l3)):
        return None
    if abs(l1 * l2) <= 1:
        return None
    if l1 < 0 and l2 > 0 and l3 < 0:
        return "LA"
    if l1 < 0 and l2 < 0 and l3 > 0:
        return "A8"
    return None


def discriminant(A, B, C):
    a, b, c = -A, -C, -B
    return 18 * a * b * c - 4 * a**3 * c + a * a * b * b - 4 * b**3 - 27 * c * c


def boundary_distance(A, B, C):
    """First-order Euclidean distance in the (A, C) plane to the nearest
    boundary curve (lines exact, curved ones via |g| / |grad g|)."""
    A = np.asarray(A, dtype=float)
    C = np.asarray(C, dtype=float)
    d = []
    d.append(np.abs(C - (1 - A - B)) / np.sqrt(2))                       # L+
    d.append(np.abs(C - (A + B + 1)) / np.sqrt(2))                       # L-
    d.append(np.abs(C - (B * B - 1 - A * B)) / np.sqrt(1 + B * B))       # L_phi
    d.append(np.abs(C - (1 + A * B + B * B)) / np.sqrt(1 + B * B))       # sigma = 1
    d.append(np.abs(A * C + B) / np.hypot(A, C))                         # |l2| = |l3|
    g = discriminant(A, B, C)
    h = 1e-7
    gA = (discriminant(A + h, B, C) - discriminant(A - h, B, C)) / (2 * h)
    gC = (discriminant(A, B, C + h) - discriminant(A, B, C - h)) / (2 * h)
    d.append(np.abs(g) / np.maximum(np.hypot(gA, gC), 1e-300))          # S+ / S-
    return np.min(d, axis=0)
