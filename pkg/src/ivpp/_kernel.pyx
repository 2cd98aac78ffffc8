# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled grid kernel: per-cell minimal-period detection for 2d maps.

Mirrors ivpp._kernel_py.period_grid; the dispatch module picks whichever
is importable.  Polynomials arrive as flat term tables (exponent pairs +
real coefficients) with segment offsets [num_x, den_x, num_y, den_y].
"""

from libc.math cimport fabs, isnan, sqrt

BACKEND_NAME = "cython"


cdef inline double _poly(double[::1] coefs, int[:, ::1] exps, int lo, int hi,
                         double x, double y) nogil:
    cdef double acc = 0.0
    cdef double term
    cdef int t, e
    for t in range(lo, hi):
        term = coefs[t]
        e = exps[t, 0]
        while e > 0:
            term *= x
            e -= 1
        e = exps[t, 1]
        while e > 0:
            term *= y
            e -= 1
        acc += term
    return acc


cdef inline double _chord(double a, double b) nogil:
    # chordal distance via normalized homogeneous pairs; inf is ordinary
    cdef double u1, v1, u2, v2, h, w
    if fabs(a) <= 1.0:
        h = sqrt(1.0 + a * a)
        u1 = a / h
        v1 = 1.0 / h
    else:
        w = 1.0 / a
        h = sqrt(1.0 + w * w)
        u1 = 1.0 / h
        v1 = w / h
    if fabs(b) <= 1.0:
        h = sqrt(1.0 + b * b)
        u2 = b / h
        v2 = 1.0 / h
    else:
        w = 1.0 / b
        h = sqrt(1.0 + w * w)
        u2 = 1.0 / h
        v2 = w / h
    return fabs(u1 * v2 - u2 * v1)


def period_grid(double[::1] coefs, int[:, ::1] exps, int[::1] offs,
                double[::1] xs, double[::1] ys, int n_max, double tol,
                short[:, ::1] out, int row_lo, int row_hi):
    """Fill out[row_lo:row_hi, :] with the first k <= n_max returning within tol.

    0 = no period found, -1 = orbit left the finite chart (near-pole cell).
    """
    cdef int i, j, k
    cdef double x0, y0, cx, cy, nx, ny, dvx, dvy, dist
    cdef short found
    with nogil:
        for i in range(row_lo, row_hi):
            y0 = ys[i]
            for j in range(xs.shape[0]):
                x0 = xs[j]
                cx = x0
                cy = y0
                found = 0
                for k in range(1, n_max + 1):
                    dvx = _poly(coefs, exps, offs[1], offs[2], cx, cy)
                    dvy = _poly(coefs, exps, offs[3], offs[4], cx, cy)
                    nx = _poly(coefs, exps, offs[0], offs[1], cx, cy) / dvx
                    ny = _poly(coefs, exps, offs[2], offs[3], cx, cy) / dvy
                    if isnan(nx) or isnan(ny):
                        found = -1
                        break
                    cx = nx
                    cy = ny
                    dist = _chord(cx, x0)
                    if _chord(cy, y0) > dist:
                        dist = _chord(cy, y0)
                    if dist < tol:
                        found = k
                        break
                out[i, j] = found
    return 0
