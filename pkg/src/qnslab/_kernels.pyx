# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled membership kernel for composite regions.

Must stay floating-point identical to ``_kernels_py.contains_many``: same
expressions, same evaluation order, per point.
"""

import numpy as np

cdef int _BALL = 0
cdef int _RECT = 1

PRIM_BALL = 0
PRIM_RECT = 1
PRIM_POLYGON = 2


def contains_many(int dim,
                  int[::1] types,
                  unsigned char[::1] closed,
                  long long[::1] offsets,
                  double[::1] payload,
                  double[:, ::1] pts):
    """Union membership of pts (N x dim float64) against packed primitives."""
    cdef Py_ssize_t n = pts.shape[0]
    cdef Py_ssize_t nprim = types.shape[0]
    out_arr = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[::1] out = out_arr
    cdef Py_ssize_t i, p, k, v, j
    cdef long long off
    cdef int t, nv
    cdef bint is_closed, hit, parity
    cdef double s, d, r2, lo, hi, px, py
    cdef double xi, yi, xj, yj

    with nogil:
        for i in range(n):
            hit = 0
            for p in range(nprim):
                off = offsets[p]
                t = types[p]
                is_closed = closed[p]
                if t == _BALL:
                    s = (pts[i, 0] - payload[off]) * (pts[i, 0] - payload[off])
                    for k in range(1, dim):
                        d = pts[i, k] - payload[off + k]
                        s = s + d * d
                    r2 = payload[off + dim] * payload[off + dim]
                    if is_closed:
                        hit = s <= r2
                    else:
                        hit = s < r2
                elif t == _RECT:
                    hit = 1
                    for k in range(dim):
                        lo = payload[off + 2 * k]
                        hi = payload[off + 2 * k + 1]
                        if is_closed:
                            if not (lo <= pts[i, k] and pts[i, k] <= hi):
                                hit = 0
                                break
                        else:
                            if not (lo < pts[i, k] and pts[i, k] < hi):
                                hit = 0
                                break
                else:
                    nv = <int> payload[off]
                    px = pts[i, 0]
                    py = pts[i, 1]
                    parity = 0
                    j = nv - 1
                    for v in range(nv):
                        xi = payload[off + 1 + 2 * v]
                        yi = payload[off + 2 + 2 * v]
                        xj = payload[off + 1 + 2 * j]
                        yj = payload[off + 2 + 2 * j]
                        if (yi > py) != (yj > py):
                            if px < (xj - xi) * (py - yi) / (yj - yi) + xi:
                                parity = not parity
                        j = v
                    hit = parity
                if hit:
                    break
            out[i] = 1 if hit else 0
    return out_arr
