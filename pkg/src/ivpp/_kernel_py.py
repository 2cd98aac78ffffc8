"""Pure-Python (numpy) grid kernel, the fallback for ivpp._kernel.

Same contract as the compiled version: per-cell minimal period up to
n_max under the chordal metric, 0 when none, -1 when the raw double
orbit leaves the finite chart (0/0 or a pole transit).
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def _poly_grid(coefs, exps, lo, hi, x, y):
    acc = np.zeros_like(x)
    for t in range(lo, hi):
        term = np.full_like(x, coefs[t])
        ex, ey = int(exps[t, 0]), int(exps[t, 1])
        if ex:
            term *= x**ex
        if ey:
            term *= y**ey
        acc += term
    return acc


def _chord_grid(a, b):
    """Chordal distance |u1 v2 - u2 v1| on arrays; handles inf, propagates nan."""
    out_u1, out_v1 = _homogeneous(a)
    out_u2, out_v2 = _homogeneous(b)
    return np.abs(out_u1 * out_v2 - out_u2 * out_v1)


def _homogeneous(a):
    small = np.abs(a) <= 1.0
    with np.errstate(all="ignore"):
        h1 = np.sqrt(1.0 + a * a)
        w = np.where(small, 0.0, 1.0 / a)  # inf -> 0 in the inverse chart
        h2 = np.sqrt(1.0 + w * w)
        u = np.where(small, a / h1, 1.0 / h2)
        v = np.where(small, 1.0 / h1, w / h2)
    return u, v


def period_grid(coefs, exps, offs, xs, ys, n_max, tol, out, row_lo, row_hi):
    """Fill out[row_lo:row_hi, :]; same encoding as the compiled kernel."""
    x0, y0 = np.meshgrid(xs, ys[row_lo:row_hi])
    cx = x0.copy()
    cy = y0.copy()
    period = np.zeros(x0.shape, dtype=np.int16)
    dead = np.zeros(x0.shape, dtype=bool)
    for k in range(1, n_max + 1):
        with np.errstate(all="ignore"):
            dvx = _poly_grid(coefs, exps, int(offs[1]), int(offs[2]), cx, cy)
            dvy = _poly_grid(coefs, exps, int(offs[3]), int(offs[4]), cx, cy)
            nx = _poly_grid(coefs, exps, int(offs[0]), int(offs[1]), cx, cy) / dvx
            ny = _poly_grid(coefs, exps, int(offs[2]), int(offs[3]), cx, cy) / dvy
        bad = np.isnan(nx) | np.isnan(ny)
        dead |= bad & (period == 0)
        cx, cy = nx, ny
        with np.errstate(all="ignore"):
            dist = np.maximum(_chord_grid(cx, x0), _chord_grid(cy, y0))
        hit = (period == 0) & ~dead & (dist < tol)
        period[hit] = k
    period[dead] = -1
    out[row_lo:row_hi, :] = period
    return 0
