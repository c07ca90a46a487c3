"""Numba kernels for the hot paths: hull maintenance and the round loop.

The monotone-chain routine here is the single convex-hull implementation in
the package; :mod:`unanimity.geometry` calls it for object-level hulls and
the trial kernel calls it in-loop.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def sorted_insert(sx, sy, m, x, y):
    """Insert (x, y) into the lexicographically sorted prefix of length m.

    Exact duplicates are dropped. Returns the new prefix length.
    """
    lo = 0
    hi = m
    while lo < hi:
        mid = (lo + hi) // 2
        if sx[mid] < x or (sx[mid] == x and sy[mid] < y):
            lo = mid + 1
        else:
            hi = mid
    if lo < m and sx[lo] == x and sy[lo] == y:
        return m
    for j in range(m, lo, -1):
        sx[j] = sx[j - 1]
        sy[j] = sy[j - 1]
    sx[lo] = x
    sy[lo] = y
    return m + 1


@njit(cache=True, nogil=True)
def convex_hull_sorted(sx, sy, m, hx, hy):
    """Andrew's monotone chain over a sorted, deduplicated point prefix.

    Writes the strictly convex hull vertices in counter-clockwise order into
    hx, hy (capacity must be >= 2m + 2) and returns the vertex count.
    Collinear edge-interior points are dropped.
    """
    if m == 0:
        return 0
    if m == 1:
        hx[0] = sx[0]
        hy[0] = sy[0]
        return 1
    k = 0
    for i in range(m):
        while k >= 2:
            cr = (hx[k - 1] - hx[k - 2]) * (sy[i] - hy[k - 2]) - (
                hy[k - 1] - hy[k - 2]
            ) * (sx[i] - hx[k - 2])
            if cr > 0.0:
                break
            k -= 1
        hx[k] = sx[i]
        hy[k] = sy[i]
        k += 1
    lower = k
    for i in range(m - 2, -1, -1):
        while k > lower:
            cr = (hx[k - 1] - hx[k - 2]) * (sy[i] - hy[k - 2]) - (
                hy[k - 1] - hy[k - 2]
            ) * (sx[i] - hx[k - 2])
            if cr > 0.0:
                break
            k -= 1
        hx[k] = sx[i]
        hy[k] = sy[i]
        k += 1
    return k - 1


@njit(cache=True, nogil=True)
def run_rounds(init_xy, cand, reserve, accepted, hull_count):
    """Run the T-round admission loop for one trial.

    init_xy: (k, 2) initial member locations.
    cand:    (T, 4) candidate pairs per round as [x1, y1, x2, y2].
    reserve: (R, 4) replacement pairs for exactly coincident draws.
    accepted, hull_count: output arrays of length T and T + 1.

    A candidate wins iff every current hull vertex is weakly closer to it
    than to the rival; ties resolve toward candidate 1. Returns the number
    of degenerate redraws consumed.
    """
    k = init_xy.shape[0]
    t_rounds = cand.shape[0]
    cap = k + t_rounds + 1
    sx = np.empty(cap, dtype=np.float64)
    sy = np.empty(cap, dtype=np.float64)
    hx = np.empty(2 * cap + 2, dtype=np.float64)
    hy = np.empty(2 * cap + 2, dtype=np.float64)

    m = 0
    for i in range(k):
        m = sorted_insert(sx, sy, m, init_xy[i, 0], init_xy[i, 1])
    h = convex_hull_sorted(sx, sy, m, hx, hy)
    hull_count[0] = h

    ri = 0
    redraws = 0
    for t in range(t_rounds):
        x1 = cand[t, 0]
        y1 = cand[t, 1]
        x2 = cand[t, 2]
        y2 = cand[t, 3]
        while x1 == x2 and y1 == y2 and ri < reserve.shape[0]:
            x1 = reserve[ri, 0]
            y1 = reserve[ri, 1]
            x2 = reserve[ri, 2]
            y2 = reserve[ri, 3]
            ri += 1
            redraws += 1

        win1 = True
        win2 = True
        if x1 == x2 and y1 == y2:
            win1 = False
            win2 = False
        else:
            ux = x2 - x1
            uy = y2 - y1
            rhs = 0.5 * ((x2 * x2 + y2 * y2) - (x1 * x1 + y1 * y1))
            for i in range(h):
                d = ux * hx[i] + uy * hy[i]
                if d > rhs:
                    win1 = False
                if d < rhs:
                    win2 = False
                if not (win1 or win2):
                    break

        if win1 or win2:
            if win1:
                m2 = sorted_insert(sx, sy, m, x1, y1)
            else:
                m2 = sorted_insert(sx, sy, m, x2, y2)
            if m2 != m:
                m = m2
                h = convex_hull_sorted(sx, sy, m, hx, hy)
            accepted[t] = True
        hull_count[t + 1] = h
    return redraws
