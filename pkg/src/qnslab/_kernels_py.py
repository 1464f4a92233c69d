"""Pure-numpy membership kernel, the fallback for the compiled extension.

The floating-point expressions here mirror ``_kernels.pyx`` operation for
operation so both backends return bit-identical masks.
"""

from __future__ import annotations

import numpy as np

PRIM_BALL = 0
PRIM_RECT = 1
PRIM_POLYGON = 2


def contains_many(dim, types, closed, offsets, payload, pts):
    """Union membership of ``pts`` (N x dim float64) against packed primitives.

    Returns a uint8 mask.  Balls and rectangles honor their closed flag;
    polygon membership uses the even-odd crossing rule (boundary points fall
    on whichever side the crossing parity assigns, a measure-zero choice).
    """
    n = pts.shape[0]
    out = np.zeros(n, dtype=np.uint8)
    for p in range(len(types)):
        todo = out == 0
        if not todo.any():
            break
        if todo.all():
            todo = slice(None)  # skip the fancy-index copy on untouched masks
        sub = pts[todo]
        off = int(offsets[p])
        t = int(types[p])
        is_closed = bool(closed[p])
        if t == PRIM_BALL:
            d = sub[:, 0] - payload[off]
            s = d * d
            for k in range(1, dim):
                d = sub[:, k] - payload[off + k]
                s += d * d
            r2 = payload[off + dim] * payload[off + dim]
            hit = s <= r2 if is_closed else s < r2
        elif t == PRIM_RECT:
            hit = np.ones(sub.shape[0], dtype=bool)
            for k in range(dim):
                lo = payload[off + 2 * k]
                hi = payload[off + 2 * k + 1]
                if is_closed:
                    hit &= (lo <= sub[:, k]) & (sub[:, k] <= hi)
                else:
                    hit &= (lo < sub[:, k]) & (sub[:, k] < hi)
        else:
            nv = int(payload[off])
            px = sub[:, 0]
            py = sub[:, 1]
            hit = np.zeros(sub.shape[0], dtype=bool)
            j = nv - 1
            with np.errstate(divide="ignore", invalid="ignore"):
                for i in range(nv):
                    xi = payload[off + 1 + 2 * i]
                    yi = payload[off + 2 + 2 * i]
                    xj = payload[off + 1 + 2 * j]
                    yj = payload[off + 2 + 2 * j]
                    cond = (yi > py) != (yj > py)
                    cross = px < (xj - xi) * (py - yi) / (yj - yi) + xi
                    hit ^= cond & cross
                    j = i
        out[todo] |= hit.astype(np.uint8)
    return out
