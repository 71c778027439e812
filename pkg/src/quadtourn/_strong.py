"""Numba subset scan for strong quadrangularity."""

import numpy as np
from numba import njit


@njit(cache=True)
def popcount(x):
    x = np.uint64(x)
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return np.int64((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


@njit(cache=True)
def shared_union(nbr, beaten_by, n, s):
    """Vertices lying in ``nbr[u] & nbr[v]`` for some distinct u, v in ``s``.

    ``beaten_by[w]`` is the set of vertices whose neighbourhood contains w,
    so w is in the union iff at least two members of ``s`` reach it.
    """
    out = np.uint64(0)
    for w in range(n):
        if popcount(beaten_by[w] & s) >= 2:
            out |= np.uint64(1) << np.uint64(w)
    return out


@njit(cache=True)
def qualifies(partner, n, s):
    """Every member of ``s`` shares a neighbour with another member."""
    if s == 0:
        return False
    for u in range(n):
        bit = np.uint64(1) << np.uint64(u)
        if s & bit and (partner[u] & s & ~bit) == 0:
            return False
    return True


@njit(cache=True)
def partners(nbr, n):
    out = np.zeros(n, np.uint64)
    for u in range(n):
        for v in range(n):
            if u != v and (nbr[u] & nbr[v]) != 0:
                out[u] |= np.uint64(1) << np.uint64(v)
    return out


@njit(cache=True)
def _scan_size(nbr, beaten_by, partner, n, size):
    idx = np.arange(size)
    while True:
        s = np.uint64(0)
        for t in range(size):
            s |= np.uint64(1) << np.uint64(idx[t])
        if qualifies(partner, n, s):
            if popcount(shared_union(nbr, beaten_by, n, s)) < size:
                return s
        # next combination in lexicographic order
        t = size - 1
        while t >= 0 and idx[t] == n - size + t:
            t -= 1
        if t < 0:
            return np.uint64(0)
        idx[t] += 1
        for r in range(t + 1, size):
            idx[r] = idx[r - 1] + 1


@njit(cache=True)
def min_violation(out_rows, in_rows, n):
    """Return ``(side, mask)``: side 0 = out, 1 = in, -1 = none found.

    Sizes are scanned upward; within a size the out side precedes the in
    side and subsets come in lexicographic order.
    """
    out_partner = partners(out_rows, n)
    in_partner = partners(in_rows, n)
    for size in range(2, n + 1):
        s = _scan_size(out_rows, in_rows, out_partner, n, size)
        if s != 0:
            return 0, s
        s = _scan_size(in_rows, out_rows, in_partner, n, size)
        if s != 0:
            return 1, s
    return -1, np.uint64(0)
