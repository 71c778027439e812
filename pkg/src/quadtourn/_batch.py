"""Per-class statistics over packed canonical keys."""

import numpy as np
from numba import njit

from quadtourn._canon import unpack_key
from quadtourn._strong import popcount


@njit(cache=True)
def _no_single_shared(rows, n):
    for u in range(n):
        for v in range(u + 1, n):
            c = rows[u] & rows[v]
            if c != 0 and (c & (c - np.uint64(1))) == 0:
                return False
    return True


@njit(cache=True)
def _gamma_le2(rows, n):
    full = (np.uint64(1) << np.uint64(n)) - np.uint64(1)
    for u in range(n):
        cu = rows[u] | (np.uint64(1) << np.uint64(u))
        if cu == full:
            return True
        for v in range(u + 1, n):
            if (cu | rows[v] | (np.uint64(1) << np.uint64(v))) == full:
                return True
    return False


@njit(cache=True, nogil=True)
def class_stats(keys, n, outq, inq, min_out, min_in, g2, gd2):
    """Fill flag/degree arrays for each packed tournament key.

    ``g2``/``gd2`` record gamma(T) <= 2 and gamma(dual T) <= 2.
    """
    cols = np.zeros(n, np.uint64)
    for t in range(keys.shape[0]):
        rows = unpack_key(keys[t], n)
        for v in range(n):
            cols[v] = np.uint64(0)
        for u in range(n):
            for v in range(n):
                if (rows[u] >> np.uint64(v)) & np.uint64(1):
                    cols[v] |= np.uint64(1) << np.uint64(u)
        outq[t] = _no_single_shared(rows, n)
        inq[t] = _no_single_shared(cols, n)
        lo, li = n, n
        for v in range(n):
            d = popcount(rows[v])
            if d < lo:
                lo = d
            if n - 1 - d < li:
                li = n - 1 - d
        min_out[t] = lo
        min_in[t] = li
        g2[t] = _gamma_le2(rows, n)
        gd2[t] = _gamma_le2(cols, n)
