"""Jitted numerical kernels for the DTW dynamic program."""

import numpy as np
from numba import njit


@njit(cache=True)
def dtw_table(a, b):
    """Accumulated cost table for squared-Euclidean DTW.

    a: (m1, d) float64, b: (m2, d) float64.  Entry [-1, -1] is the DTW
    distance.  Predecessors are (i-1, j), (i, j-1) and (i-1, j-1).
    """
    m1 = a.shape[0]
    m2 = b.shape[0]
    d = a.shape[1]
    acc = np.empty((m1, m2), dtype=np.float64)
    for i in range(m1):
        for j in range(m2):
            c = 0.0
            for t in range(d):
                diff = a[i, t] - b[j, t]
                c += diff * diff
            if i == 0 and j == 0:
                best = 0.0
            elif i == 0:
                best = acc[0, j - 1]
            elif j == 0:
                best = acc[i - 1, 0]
            else:
                best = acc[i - 1, j - 1]
                if acc[i - 1, j] < best:
                    best = acc[i - 1, j]
                if acc[i, j - 1] < best:
                    best = acc[i, j - 1]
            acc[i, j] = c + best
    return acc


@njit(cache=True)
def backtrack(a, b, acc):
    """Extract one optimal path from the accumulated table (0-based).

    Tie preference when several predecessors attain the optimum:
    diagonal, then (i-1, j), then (i, j-1).  Uses exact float equality,
    which is sound because costs are recomputed with the identical
    operations used in the forward pass.
    """
    m1 = a.shape[0]
    m2 = b.shape[0]
    d = a.shape[1]
    buf_i = np.empty(m1 + m2, dtype=np.int64)
    buf_j = np.empty(m1 + m2, dtype=np.int64)
    i = m1 - 1
    j = m2 - 1
    idx = 0
    while i > 0 or j > 0:
        buf_i[idx] = i
        buf_j[idx] = j
        idx += 1
        c = 0.0
        for t in range(d):
            diff = a[i, t] - b[j, t]
            c += diff * diff
        if i > 0 and j > 0 and acc[i, j] == c + acc[i - 1, j - 1]:
            i -= 1
            j -= 1
        elif i > 0 and acc[i, j] == c + acc[i - 1, j]:
            i -= 1
        else:
            j -= 1
    buf_i[idx] = 0
    buf_j[idx] = 0
    idx += 1
    return buf_i[:idx][::-1].copy(), buf_j[:idx][::-1].copy()
