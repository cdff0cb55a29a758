"""Branch-and-bound kernel for maximal admissible subsets.

The search of :func:`qconics.bounds.max_admissible` dominates the table
computations, so it is compiled with numba when available; the pure-Python
implementation in bounds.py doubles as the fallback (QC_KERNEL=numpy).

State per node: candidate bitset (uint64 words) and the exact integer perp
basis of the span; a greedy colouring bound orders the branching.  Entries
of the perp basis stay tiny after gcd reduction, but the kernel aborts with
-1 (caller falls back to exact Python) if they ever threaten int64.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover
    HAS_NUMBA = False

    def njit(*args, **kwargs):  # type: ignore
        def wrap(f):
            return f
        return wrap(args[0]) if args and callable(args[0]) else wrap


LIMIT = np.int64(1) << 40


@njit(cache=True)
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@njit(cache=True)
def _perp_add(w, nrows, m, gen, out):
    """out = perp basis after adding gen; returns new row count (or -1)."""
    piv = -1
    pd = np.int64(0)
    dots = np.zeros(nrows, dtype=np.int64)
    for i in range(nrows):
        s = np.int64(0)
        for j in range(m):
            s += w[i, j] * gen[j]
        dots[i] = s
        if s != 0 and (piv < 0 or abs(s) < abs(pd)):
            piv = i
            pd = s
    if piv < 0:
        for i in range(nrows):
            for j in range(m):
                out[i, j] = w[i, j]
        return nrows
    k = 0
    for i in range(nrows):
        if i == piv:
            continue
        if dots[i] == 0:
            for j in range(m):
                out[k, j] = w[i, j]
        else:
            g = np.int64(0)
            for j in range(m):
                v = pd * w[i, j] - dots[i] * w[piv, j]
                if v > LIMIT or v < -LIMIT:
                    return -1
                out[k, j] = v
                g = _gcd(g, abs(v))
            if g > 1:
                for j in range(m):
                    out[k, j] //= g
        k += 1
    return k


@njit(cache=True)
def _has_root(w, nrows, root_cols):
    for i in range(root_cols):
        for j in range(i + 1, root_cols):
            same = True
            neg = True
            for r in range(nrows):
                if w[r, i] != w[r, j]:
                    same = False
                if w[r, i] != -w[r, j]:
                    neg = False
                if not same and not neg:
                    break
            if same or neg:
                return True
    return False


@njit(cache=True)
def _mc_kernel(gens, adj, nwords, root_cols, w0, nr0, start_best):
    """Exact maximum admissible-subset size (see module docstring)."""
    nv = gens.shape[0]
    m = gens.shape[1]
    maxd = nv + 2
    P = np.zeros((maxd, nwords), dtype=np.uint64)
    ORD = np.zeros((maxd, nv), dtype=np.int32)
    CB = np.zeros((maxd, nv), dtype=np.int32)
    CNT = np.zeros(maxd, dtype=np.int32)
    PTR = np.zeros(maxd, dtype=np.int32)
    W = np.zeros((maxd, m + nr0, m), dtype=np.int64)
    WR = np.zeros(maxd, dtype=np.int32)
    classes = np.zeros((nv, nwords), dtype=np.uint64)
    scratch = np.zeros((m + nr0, m), dtype=np.int64)

    best = start_best
    for i in range(nr0):
        for j in range(m):
            W[0, i, j] = w0[i, j]
    WR[0] = nr0
    if _has_root(W[0], nr0, root_cols):
        return 0
    # level 0 candidates: everything
    for wdx in range(nwords):
        P[0, wdx] = np.uint64(0)
    for v in range(nv):
        P[0, v >> 6] |= np.uint64(1) << np.uint64(v & 63)

    level = 0
    size = 0
    # colour level 0
    ncls = 0
    cnt = 0
    for v in range(nv):
        if not (P[0, v >> 6] >> np.uint64(v & 63)) & np.uint64(1):
            continue
        placed = -1
        for c in range(ncls):
            hit = False
            for wdx in range(nwords):
                if classes[c, wdx] & adj[v, wdx]:
                    hit = True
                    break
            if not hit:
                placed = c
                break
        if placed < 0:
            placed = ncls
            for wdx in range(nwords):
                classes[placed, wdx] = np.uint64(0)
            ncls += 1
        classes[placed, v >> 6] |= np.uint64(1) << np.uint64(v & 63)
        ORD[0, cnt] = v
        CB[0, cnt] = placed + 1
        cnt += 1
    # sort by colour bound ascending (insertion, nv small)
    for i in range(1, cnt):
        kv = ORD[0, i]
        kb = CB[0, i]
        j = i - 1
        while j >= 0 and CB[0, j] > kb:
            ORD[0, j + 1] = ORD[0, j]
            CB[0, j + 1] = CB[0, j]
            j -= 1
        ORD[0, j + 1] = kv
        CB[0, j + 1] = kb
    CNT[0] = cnt
    PTR[0] = cnt - 1

    while level >= 0:
        ptr = PTR[level]
        if ptr < 0:
            level -= 1
            size -= 1
            continue
        v = ORD[level, ptr]
        cb = CB[level, ptr]
        PTR[level] = ptr - 1
        if size + cb <= best:
            # all remaining entries bound lower; abandon the level
            level -= 1
            size -= 1
            continue
        # remove v from the level's candidate set
        P[level, v >> 6] &= ~(np.uint64(1) << np.uint64(v & 63))
        nr = _perp_add(W[level], WR[level], m, gens[v], scratch)
        if nr < 0:
            return -1
        if _has_root(scratch, nr, root_cols):
            continue
        # child candidates
        nxt = level + 1
        empty = True
        for wdx in range(nwords):
            P[nxt, wdx] = P[level, wdx] & adj[v, wdx]
            if P[nxt, wdx]:
                empty = False
        if empty:
            if size + 1 > best:
                best = size + 1
            continue
        for i in range(nr):
            for j in range(m):
                W[nxt, i, j] = scratch[i, j]
        WR[nxt] = nr
        # colour the child level
        ncls = 0
        cnt = 0
        for u in range(nv):
            if not (P[nxt, u >> 6] >> np.uint64(u & 63)) & np.uint64(1):
                continue
            placed = -1
            for c in range(ncls):
                hit = False
                for wdx in range(nwords):
                    if classes[c, wdx] & adj[u, wdx]:
                        hit = True
                        break
                if not hit:
                    placed = c
                    break
            if placed < 0:
                placed = ncls
                for wdx in range(nwords):
                    classes[placed, wdx] = np.uint64(0)
                ncls += 1
            classes[placed, u >> 6] |= np.uint64(1) << np.uint64(u & 63)
            ORD[nxt, cnt] = u
            CB[nxt, cnt] = placed + 1
            cnt += 1
        if size + 1 + ncls <= best:
            continue
        for i in range(1, cnt):
            kv = ORD[nxt, i]
            kb = CB[nxt, i]
            j = i - 1
            while j >= 0 and CB[nxt, j] > kb:
                ORD[nxt, j + 1] = ORD[nxt, j]
                CB[nxt, j + 1] = CB[nxt, j]
                j -= 1
            ORD[nxt, j + 1] = kv
            CB[nxt, j + 1] = kb
        CNT[nxt] = cnt
        PTR[nxt] = cnt - 1
        if size + 1 > best:
            best = size + 1
        level = nxt
        size += 1
    return best


def run_search(gens_list, compat, ncols, fixed, root_cols, seed_best=0):
    """numba-backed exact search; returns None if the kernel declines."""
    if not HAS_NUMBA:
        return None
    nv = len(gens_list)
    if nv == 0:
        return 0
    m = ncols
    gens = np.array(gens_list, dtype=np.int64)
    nwords = (nv + 63) // 64
    adj = np.zeros((nv, nwords), dtype=np.uint64)
    for v in range(nv):
        mask = compat[v]
        for wdx in range(nwords):
            adj[v, wdx] = np.uint64((mask >> (64 * wdx)) & ((1 << 64) - 1))
    # initial perp basis from the fixed generators, computed exactly in python
    from . import bounds as _b
    w0t = _b.perp_from(ncols, fixed)
    w0 = np.array([list(r) for r in w0t], dtype=np.int64).reshape(len(w0t), m)
    res = _mc_kernel(gens, adj, nwords, root_cols, w0, len(w0t), seed_best)
    if res < 0:
        return None
    return int(res)
