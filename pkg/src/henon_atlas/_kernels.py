"""Compiled numeric cores: cubic roots, fixed-point labels, tangent-map iteration.

Everything here takes and returns plain floats/arrays so the same code runs
from the scalar API and from the raster loops.  Functions are compiled with
``nogil=True`` so thread pools get real parallelism.
"""
import math

import numpy as np
from numba import njit

# RegionLabel codes (mirrored by spectrum.RegionLabel)
STABLE, LA, LQA, A8, QA8, D8A, D8QA, S8A, S8QA = 0, 1, 2, 3, 4, 5, 6, 7, 8
SPIRAL, SHILNIKOV, SADDLE12, SADDLE21MIXED, REPELLER, ON_BOUNDARY = 9, 10, 11, 12, 13, 14

# boundary markers
NO_MARK, MARK_LPLUS, MARK_LMINUS, MARK_LPHI, MARK_DOUBLE = 0, 1, 2, 3, 4


@njit(cache=True, nogil=True)
def _chi(lam, A, B, C):
    return ((lam - A) * lam - C) * lam - B


@njit(cache=True, nogil=True)
def _polish_real(lam, A, B, C):
    best = lam
    best_res = abs(_chi(lam, A, B, C))
    for _ in range(4):
        d = (3.0 * lam - 2.0 * A) * lam - C
        if d == 0.0:
            break
        lam = lam - _chi(lam, A, B, C) / d
        res = abs(_chi(lam, A, B, C))
        if res < best_res:
            best, best_res = lam, res
        else:
            break
    return best


@njit(cache=True, nogil=True)
def _polish_complex(lam, A, B, C):
    best = lam
    best_res = abs(((lam - A) * lam - C) * lam - B)
    for _ in range(4):
        d = (3.0 * lam - 2.0 * A) * lam - C
        if d == 0:
            break
        lam = lam - (((lam - A) * lam - C) * lam - B) / d
        res = abs(((lam - A) * lam - C) * lam - B)
        if res < best_res:
            best, best_res = lam, res
        else:
            break
    return best


@njit(cache=True, nogil=True)
def _quadratic(p, q):
    """Roots of x^2 + p x + q as (re1, im1, re2, im2), cancellation-free."""
    disc = p * p - 4.0 * q
    if disc >= 0.0:
        s = -0.5 * (p + math.copysign(math.sqrt(disc), p))
        if s == 0.0:
            return 0.0, 0.0, 0.0, 0.0
        return s, 0.0, q / s, 0.0
    im = 0.5 * math.sqrt(-disc)
    return -0.5 * p, im, -0.5 * p, -im


@njit(cache=True, nogil=True)
def cubic_discriminant(A, B, C):
    """Discriminant of l^3 - A l^2 - C l - B."""
    a, b, c = -A, -C, -B
    return 18.0 * a * b * c - 4.0 * a**3 * c + a * a * b * b - 4.0 * b**3 - 27.0 * c * c


@njit(cache=True, nogil=True)
def cubic_roots(A, B, C):
    """Roots of l^3 - A l^2 - C l - B.

    Returns ``out`` (length 6: re, im pairs) and the number of non-real roots.
    Closed form (trigonometric or Cardano) followed by Newton polishing.
    """
    out = np.zeros(6)
    if B == 0.0:
        # l (l^2 - A l - C)
        r1, i1, r2, i2 = _quadratic(-A, -C)
        out[0], out[1], out[2], out[3] = r1, i1, r2, i2
        if i1 == 0.0:
            out[0] = _polish_real(r1, A, B, C)
            out[2] = _polish_real(r2, A, B, C)
            return out, 0
        return out, 2
    a, b, c = -A, -C, -B
    shift = a / 3.0
    p = b - a * a / 3.0
    q = 2.0 * a**3 / 27.0 - a * b / 3.0 + c
    disc = -(4.0 * p**3 + 27.0 * q * q)
    tol = 1e-12 * (4.0 * abs(p) ** 3 + 27.0 * q * q)
    if disc > tol and p < 0.0:
        m = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * m)
        if arg > 1.0:
            arg = 1.0
        elif arg < -1.0:
            arg = -1.0
        theta = math.acos(arg) / 3.0
        for k in range(3):
            t = m * math.cos(theta - 2.0 * math.pi * k / 3.0)
            out[2 * k] = _polish_real(t - shift, A, B, C)
        return out, 0
    if disc < -tol:
        D = q * q / 4.0 + p**3 / 27.0
        w = -0.5 * q - math.copysign(math.sqrt(max(D, 0.0)), q)
        u = math.copysign(abs(w) ** (1.0 / 3.0), w)
        if u != 0.0:
            t = u - p / (3.0 * u)
        else:
            t = -math.copysign(abs(q) ** (1.0 / 3.0), q)
        r = _polish_real(t - shift, A, B, C)
        s = -a - r
        P = b - r * s
        if r != 0.0 and abs(r) > 1.0:
            P = -c / r
        r1, i1, r2, i2 = _quadratic(-s, P)
        out[0] = r
        if i1 == 0.0:
            out[2] = _polish_real(r1, A, B, C)
            out[4] = _polish_real(r2, A, B, C)
            return out, 0
        z = _polish_complex(complex(r1, abs(i1)), A, B, C)
        out[2], out[3] = z.real, abs(z.imag)
        out[4], out[5] = z.real, -abs(z.imag)
        return out, 2
    # repeated roots
    if abs(p) <= 1e-14 * max(1.0, abs(a) ** 2):
        for k in range(3):
            out[2 * k] = -shift
        return out, 0
    t_simple = 3.0 * q / p
    t_double = -1.5 * q / p
    out[0] = _polish_real(t_simple - shift, A, B, C)
    out[2] = t_double - shift
    out[4] = t_double - shift
    return out, 0


@njit(cache=True, nogil=True)
def _sorted_moduli_order(roots):
    # indices of the three roots by descending modulus
    m0 = math.hypot(roots[0], roots[1])
    m1 = math.hypot(roots[2], roots[3])
    m2 = math.hypot(roots[4], roots[5])
    idx = np.array([0, 1, 2])
    mods = np.array([m0, m1, m2])
    for i in range(3):
        for j in range(2 - i):
            if mods[idx[j]] < mods[idx[j + 1]]:
                tmp = idx[j]
                idx[j] = idx[j + 1]
                idx[j + 1] = tmp
    return idx, mods


@njit(cache=True, nogil=True)
def classify_core(A, B, C, tol):
    """Return (label, n_unstable, sigma, marker, roots(6), n_complex)."""
    roots, ncomplex = cubic_roots(A, B, C)
    idx, mods = _sorted_moduli_order(roots)
    sigma = math.nan
    marker = NO_MARK
    n_unit = 0
    for k in range(3):
        if abs(mods[k] - 1.0) <= tol:
            n_unit += 1
            re, im = roots[2 * k], roots[2 * k + 1]
            if im != 0.0:
                marker = MARK_LPHI
            elif re > 0.0:
                marker = MARK_LPLUS
            else:
                marker = MARK_LMINUS
    if n_unit >= 2 and marker != MARK_LPHI:
        marker = MARK_DOUBLE
    n_u = 0
    for k in range(3):
        if mods[k] > 1.0:
            n_u += 1
    if n_unit > 0:
        return ON_BOUNDARY, n_u, sigma, marker, roots, ncomplex
    if n_u == 0:
        return STABLE, n_u, sigma, marker, roots, ncomplex
    if n_u == 3:
        return REPELLER, n_u, sigma, marker, roots, ncomplex
    two_d = B == 0.0
    if n_u == 2:
        if two_d:
            return REPELLER, n_u, sigma, marker, roots, ncomplex
        if ncomplex == 2 and roots[2 * idx[0] + 1] != 0.0:
            return SHILNIKOV, n_u, sigma, marker, roots, ncomplex
        return SADDLE12, n_u, sigma, marker, roots, ncomplex
    # one unstable multiplier; it is real because a complex pair shares its modulus
    i0, i1, i2 = idx[0], idx[1], idx[2]
    l1 = roots[2 * i0]
    sigma = mods[i0] * mods[i1]
    if ncomplex == 2:
        return SPIRAL, n_u, sigma, marker, roots, ncomplex
    lead = roots[2 * i1]
    other = roots[2 * i2]
    if two_d:
        # the exact zero multiplier is the non-leading stable one
        if lead == 0.0:
            lead, other = other, lead
    elif mods[i1] == mods[i2]:
        return SADDLE21MIXED, n_u, sigma, marker, roots, ncomplex
    big = sigma > 1.0
    if l1 < 0.0:
        if lead > 0.0 and other <= 0.0:
            return (LA if big else LQA), n_u, sigma, marker, roots, ncomplex
        if lead < 0.0 and other >= 0.0:
            return (A8 if big else QA8), n_u, sigma, marker, roots, ncomplex
    else:
        if lead < 0.0 and other <= 0.0:
            return (D8A if big else D8QA), n_u, sigma, marker, roots, ncomplex
        if lead > 0.0 and other >= 0.0:
            return (S8A if big else S8QA), n_u, sigma, marker, roots, ncomplex
    return SADDLE21MIXED, n_u, sigma, marker, roots, ncomplex


@njit(cache=True, nogil=True)
def chart_core(B, A_min, A_max, C_min, C_max, W, H, tol):
    labels = np.empty((H, W), dtype=np.int64)
    roots = np.empty((H, W, 6))
    sigma = np.empty((H, W))
    dA = (A_max - A_min) / W
    dC = (C_max - C_min) / H
    for j in range(H):
        C = C_min + (j + 0.5) * dC
        for i in range(W):
            A = A_min + (i + 0.5) * dA
            lab, n_u, sg, mk, r, nc = classify_core(A, B, C, tol)
            labels[j, i] = lab
            sigma[j, i] = sg
            roots[j, i, :] = r
    return labels, roots, sigma


@njit(cache=True, nogil=True)
def _poly_terms(ei, ej, co, y, z):
    f = 0.0
    fy = 0.0
    fz = 0.0
    for t in range(co.shape[0]):
        i = ei[t]
        j = ej[t]
        c = co[t]
        yi = y**i
        zj = z**j
        f += c * yi * zj
        if i > 0:
            fy += c * i * y ** (i - 1) * zj
        if j > 0:
            fz += c * j * yi * z ** (j - 1)
    return f, fy, fz


@njit(cache=True, nogil=True)
def _mgs(W, dim, sums, accumulate):
    """Modified Gram-Schmidt on the columns of W in place.

    Adds log column norms to ``sums`` when ``accumulate``; returns False if
    a norm is zero or not finite.
    """
    for col in range(dim):
        for prev in range(col):
            dot = 0.0
            for r in range(dim):
                dot += W[r, col] * W[r, prev]
            for r in range(dim):
                W[r, col] -= dot * W[r, prev]
        nrm2 = 0.0
        for r in range(dim):
            nrm2 += W[r, col] * W[r, col]
        nrm = math.sqrt(nrm2)
        if not (nrm > 0.0 and nrm < math.inf):
            return False
        if accumulate:
            sums[col] += math.log(nrm)
        for r in range(dim):
            W[r, col] /= nrm
    return True


@njit(cache=True, nogil=True)
def lyapunov3(A, B, C, ei, ej, co, x0, Q0, n_transient, n_measure,
              renorm_period, radius, n_sample):
    """Orbit plus tangent frame for the 3D map.

    The frame is carried (and kept orthonormal) through the transient too, so
    the measurement starts from an aligned frame; log stretches are summed
    only over the ``n_measure`` measured steps.
    Returns (escaped, escape_step, sums(3), min_dist, sample, n_filled).
    """
    x, y, z = x0[0], x0[1], x0[2]
    sums = np.zeros(3)
    sample = np.zeros((n_sample, 3))
    dmin = math.inf
    Q = Q0.copy()
    stride = max(1, n_measure // max(n_sample, 1))
    filled = 0
    total = n_transient + n_measure
    for n in range(total):
        k = n - n_transient
        measuring = k >= 0
        f, fy, fz = _poly_terms(ei, ej, co, y, z)
        a32 = C + fy
        a33 = A + fz
        for col in range(3):
            q0 = Q[0, col]
            q1 = Q[1, col]
            q2 = Q[2, col]
            Q[0, col] = q1
            Q[1, col] = q2
            Q[2, col] = B * q0 + a32 * q1 + a33 * q2
        x, y, z = y, z, B * x + A * z + C * y + f
        if not abs(z) <= radius:
            return True, n + 1, sums, dmin, sample, filled
        if measuring:
            d = math.sqrt(x * x + y * y + z * z)
            if d < dmin:
                dmin = d
            if filled < n_sample and k % stride == 0:
                sample[filled, 0] = x
                sample[filled, 1] = y
                sample[filled, 2] = z
                filled += 1
            renorm = (k + 1) % renorm_period == 0 or k == n_measure - 1
        else:
            renorm = (n + 1) % renorm_period == 0 or k == -1
        if renorm and not _mgs(Q, 3, sums, measuring):
            return True, n + 1, sums, dmin, sample, filled
    return False, -1, sums, dmin, sample, filled


@njit(cache=True, nogil=True)
def lyapunov2(A, C, ei, ej, co, y0, z0, Q0, n_transient, n_measure,
              renorm_period, radius, n_sample):
    """Same as :func:`lyapunov3` for the planar (B = 0) map on (y, z).

    The sample rows are full (x, y, z) states with x the previous y.
    """
    x, y, z = 0.0, y0, z0
    sums = np.zeros(2)
    sample = np.zeros((n_sample, 3))
    dmin = math.inf
    Q = Q0.copy()
    stride = max(1, n_measure // max(n_sample, 1))
    filled = 0
    total = n_transient + n_measure
    for n in range(total):
        k = n - n_transient
        measuring = k >= 0
        f, fy, fz = _poly_terms(ei, ej, co, y, z)
        a21 = C + fy
        a22 = A + fz
        for col in range(2):
            q0 = Q[0, col]
            q1 = Q[1, col]
            Q[0, col] = q1
            Q[1, col] = a21 * q0 + a22 * q1
        x, y, z = y, z, A * z + C * y + f
        if not abs(z) <= radius:
            return True, n + 1, sums, dmin, sample, filled
        if measuring:
            d = math.sqrt(y * y + z * z)
            if d < dmin:
                dmin = d
            if filled < n_sample and k % stride == 0:
                sample[filled, 0] = x
                sample[filled, 1] = y
                sample[filled, 2] = z
                filled += 1
            renorm = (k + 1) % renorm_period == 0 or k == n_measure - 1
        else:
            renorm = (n + 1) % renorm_period == 0 or k == -1
        if renorm and not _mgs(Q, 2, sums, measuring):
            return True, n + 1, sums, dmin, sample, filled
    return False, -1, sums, dmin, sample, filled


@njit(cache=True, nogil=True)
def map_points(A, B, C, ei, ej, co, pts, n_steps, inverse):
    """Apply the map (or its inverse) ``n_steps`` times to every row of ``pts``."""
    out = pts.copy()
    for r in range(out.shape[0]):
        x, y, z = out[r, 0], out[r, 1], out[r, 2]
        for _ in range(n_steps):
            if inverse:
                f, fy, fz = _poly_terms(ei, ej, co, x, y)
                x, y, z = (z - A * y - C * x - f) / B, x, y
            else:
                f, fy, fz = _poly_terms(ei, ej, co, y, z)
                x, y, z = y, z, B * x + A * z + C * y + f
            if not (abs(x) < 1e150 and abs(y) < 1e150 and abs(z) < 1e150):
                x = y = z = math.inf
                break
        out[r, 0], out[r, 1], out[r, 2] = x, y, z
    return out
