"""Numba kernels for canonical labelling of tournaments.

A tournament is passed as ``rows``: a uint64 array where bit ``j`` of
``rows[i]`` is set iff ``i -> j``.  The canonical key is the
lexicographically largest upper-triangular arc string (row-major, pair
(0, 1) first) over all labellings reachable in an individualisation /
refinement search tree.  Every automorphism permutes the leaves of that
tree, so the number of leaves attaining the best key is ``|Aut(T)|``.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _sig_less(counts, colors, a, b, k):
    if colors[a] != colors[b]:
        return colors[a] < colors[b]
    for c in range(k):
        if counts[a, c] != counts[b, c]:
            return counts[a, c] < counts[b, c]
    return False


@njit(cache=True)
def _sig_equal(counts, colors, a, b, k):
    if colors[a] != colors[b]:
        return False
    for c in range(k):
        if counts[a, c] != counts[b, c]:
            return False
    return True


@njit(cache=True)
def refine(rows, n, colors):
    """Equitable refinement of an ordered colouring; returns a new array.

    Colours are renumbered 0..k-1 in an isomorphism-invariant order: by old
    colour, then by the vector of out-neighbour counts per colour.
    """
    colors = colors.copy()
    order = np.empty(n, np.int64)
    while True:
        k = 0
        for v in range(n):
            if colors[v] + 1 > k:
                k = colors[v] + 1
        if k == n:
            return colors
        counts = np.zeros((n, k), np.int64)
        for v in range(n):
            r = rows[v]
            for u in range(n):
                if (r >> np.uint64(u)) & np.uint64(1):
                    counts[v, colors[u]] += 1
        for i in range(n):
            order[i] = i
        # insertion sort, n <= 64
        for i in range(1, n):
            x = order[i]
            j = i - 1
            while j >= 0 and _sig_less(counts, colors, x, order[j], k):
                order[j + 1] = order[j]
                j -= 1
            order[j + 1] = x
        new = np.empty(n, np.int64)
        c = 0
        new[order[0]] = 0
        for i in range(1, n):
            if not _sig_equal(counts, colors, order[i], order[i - 1], k):
                c += 1
            new[order[i]] = c
        colors = new
        if c + 1 == k:
            return colors


@njit(cache=True)
def _target_cell(colors, n):
    sizes = np.zeros(n, np.int64)
    for v in range(n):
        sizes[colors[v]] += 1
    for c in range(n):
        if sizes[c] > 1:
            return c
    return -1


@njit(cache=True)
def _leaf_rows(rows, n, colors, out):
    perm = np.empty(n, np.int64)
    for v in range(n):
        perm[colors[v]] = v
    for i in range(n):
        r = rows[perm[i]]
        val = np.uint64(0)
        for j in range(i + 1, n):
            if (r >> np.uint64(perm[j])) & np.uint64(1):
                val |= np.uint64(1) << np.uint64(n - 1 - j)
        out[i] = val
    return perm


@njit(cache=True)
def canonical_labelling(rows, n):
    """Return ``(perm, best, aut)``.

    ``perm[i]`` is the original vertex placed at canonical position ``i``;
    ``best[i]`` holds the upper-triangular part of canonical row ``i`` with
    column ``i + 1`` as the most significant bit; ``aut`` is ``|Aut(T)|``.
    """
    best = np.zeros(n, np.uint64)
    best_perm = np.arange(n)
    if n <= 1:
        return best_perm, best, 1
    cand = np.zeros(n, np.uint64)
    stack = np.empty((n + 1, n), np.int64)
    target = np.empty(n + 1, np.int64)
    nxt = np.zeros(n + 1, np.int64)
    stack[0] = refine(rows, n, np.zeros(n, np.int64))
    target[0] = _target_cell(stack[0], n)
    have = False
    aut = 0
    d = 0
    while d >= 0:
        cols = stack[d]
        c = target[d]
        if c < 0:
            perm = _leaf_rows(rows, n, cols, cand)
            cmp = 0
            if have:
                for i in range(n):
                    if cand[i] != best[i]:
                        cmp = 1 if cand[i] > best[i] else -1
                        break
            else:
                cmp = 1
            if cmp > 0:
                best[:] = cand
                best_perm = perm
                aut = 1
                have = True
            elif cmp == 0:
                aut += 1
            d -= 1
            continue
        v = nxt[d]
        while v < n and cols[v] != c:
            v += 1
        if v >= n:
            d -= 1
            continue
        nxt[d] = v + 1
        child = np.empty(n, np.int64)
        for u in range(n):
            cu = cols[u]
            if cu > c or (cu == c and u != v):
                child[u] = cu + 1
            else:
                child[u] = cu
        stack[d + 1] = refine(rows, n, child)
        target[d + 1] = _target_cell(stack[d + 1], n)
        nxt[d + 1] = 0
        d += 1
    return best_perm, best, aut


@njit(cache=True)
def pack_key(best, n):
    """Concatenate canonical row parts into one integer (n <= 11)."""
    key = np.int64(0)
    for i in range(n):
        w = n - 1 - i
        key = (key << w) | np.int64(best[i])
    return key


@njit(cache=True)
def unpack_key(key, n):
    """Inverse of :func:`pack_key`: rebuild adjacency rows."""
    rows = np.zeros(n, np.uint64)
    pos = n * (n - 1) // 2
    for i in range(n):
        for j in range(i + 1, n):
            pos -= 1
            if (key >> np.int64(pos)) & 1:
                rows[i] |= np.uint64(1) << np.uint64(j)
            else:
                rows[j] |= np.uint64(1) << np.uint64(i)
    return rows


@njit(cache=True, nogil=True)
def extend_and_canonicalize(parent_keys, m, out_keys, out_aut):
    """Add one vertex to every parent (order ``m``) in every way.

    Candidate ``p * 2**m + mask`` has the new vertex ``m`` beaten by exactly
    the parent vertices whose bit is set in ``mask``.
    """
    n = m + 1
    width = 1 << m
    rows = np.zeros(n, np.uint64)
    for p in range(parent_keys.shape[0]):
        prow = unpack_key(parent_keys[p], m)
        for mask in range(width):
            newrow = np.uint64(0)
            for u in range(m):
                r = prow[u]
                if (mask >> u) & 1:
                    r |= np.uint64(1) << np.uint64(m)
                else:
                    newrow |= np.uint64(1) << np.uint64(u)
                rows[u] = r
            rows[m] = newrow
            perm, best, aut = canonical_labelling(rows, n)
            out_keys[p * width + mask] = pack_key(best, n)
            out_aut[p * width + mask] = aut
