"""Enumeration kernels for fixed-norm vectors in (cosets of) definite lattices.

The search is a depth-first interval propagation over an exact rational
Cholesky decomposition of the Gram matrix.  Floats are used only to compute
conservative pruning bounds (with a fixed safety margin far above the
attainable rounding error); every emitted vector is re-checked with exact
int64 arithmetic, so the output is exact.

Two interchangeable backends exist:

* ``numba`` -- an @njit compiled DFS (default when numba imports);
* ``numpy`` -- a vectorised block-BFS in pure numpy.

Select with the environment variable ``QC_KERNEL=numba|numpy``.
"""

from __future__ import annotations

import os

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


#: pruning slack, in units of the scaled quadratic form; float error on the
#: partial sums is bounded far below this for the matrix sizes used here
MARGIN = 1e-3


def backend() -> str:
    env = os.environ.get("QC_KERNEL", "").strip().lower()
    if env in ("numba", "numpy"):
        if env == "numba" and not HAS_NUMBA:
            raise RuntimeError("QC_KERNEL=numba requested but numba is unavailable")
        return env
    return "numba" if HAS_NUMBA else "numpy"


@njit(cache=True)
def _dfs_kernel(d, u, sigma, gq, pvec, q, cq, eq_only, out):
    """DFS enumeration; returns the number of solutions found.

    d, u     -- float Cholesky of the scaled Gram G (unit upper-triangular u)
    sigma    -- float coset shift (coordinates w.r.t. the basis)
    gq, pvec, q, cq -- exact data: (q*z + pvec) @ gq @ (q*z + pvec) vs q^2-scaled
                target cq, everything int64
    eq_only  -- accept only exact equality (else 0 < value <= cq)
    out      -- preallocated int64 buffer (cap, r); filled up to cap
    """
    r = d.shape[0]
    cap = out.shape[0]
    count = 0
    tf = cq / (q * q)

    z = np.zeros(r, dtype=np.int64)
    lo = np.zeros(r, dtype=np.int64)
    hi = np.zeros(r, dtype=np.int64)
    rem = np.zeros(r + 1, dtype=np.float64)
    cen = np.zeros(r, dtype=np.float64)

    lvl = r - 1
    rem[r] = tf
    descend = True
    while lvl < r:
        if descend:
            c = sigma[lvl]
            for j in range(lvl + 1, r):
                c += u[lvl, j] * (z[j] + sigma[j])
            cen[lvl] = c
            bound = (rem[lvl + 1] + MARGIN) / d[lvl]
            if bound < 0.0:
                bound = 0.0
            w = np.sqrt(bound)
            lo[lvl] = np.int64(np.ceil(-c - w))
            hi[lvl] = np.int64(np.floor(-c + w))
            z[lvl] = lo[lvl]
        else:
            z[lvl] += 1
        if z[lvl] > hi[lvl]:
            lvl += 1
            descend = False
            continue
        y = z[lvl] + cen[lvl]
        rem[lvl] = rem[lvl + 1] - d[lvl] * y * y
        if rem[lvl] < -MARGIN:
            descend = False
            continue
        if lvl == 0:
            # exact check in int64
            val = np.int64(0)
            for i in range(r):
                zi = q * z[i] + pvec[i]
                row = np.int64(0)
                for j in range(r):
                    row += gq[i, j] * (q * z[j] + pvec[j])
                val += zi * row
            ok = (val == cq) if eq_only else (0 < val <= cq)
            if ok:
                if count < cap:
                    out[count] = z
                count += 1
            descend = False
        else:
            lvl -= 1
            descend = True
    return count


def _dfs_python(d, u, sigma, gq, pvec, q, cq, eq_only, collect):
    """Pure-python reference of the DFS (used only for tiny oracles)."""
    r = len(d)
    tf = cq / (q * q)
    z = [0] * r

    def rec(lvl, rem):
        c = sigma[lvl] + sum(u[lvl][j] * (z[j] + sigma[j]) for j in range(lvl + 1, r))
        w = ((rem + MARGIN) / d[lvl]) ** 0.5 if rem + MARGIN > 0 else 0.0
        for zi in range(int(np.ceil(-c - w)), int(np.floor(-c + w)) + 1):
            z[lvl] = zi
            y = zi + c
            rem2 = rem - d[lvl] * y * y
            if rem2 < -MARGIN:
                continue
            if lvl == 0:
                zz = [q * z[i] + pvec[i] for i in range(r)]
                val = sum(zz[i] * sum(gq[i][j] * zz[j] for j in range(r))
                          for i in range(r))
                if (val == cq) if eq_only else (0 < val <= cq):
                    collect(list(z))
            else:
                rec(lvl - 1, rem2)
        z[lvl] = 0

    rec(r - 1, tf)


def _bfs_numpy(d, u, sigma, gq, pvec, q, cq, eq_only, block=1 << 18):
    """Vectorised block-BFS backend; semantics identical to the DFS kernel."""
    r = d.shape[0]
    tf = cq / (q * q)
    results = []
    # stack of partial blocks: (level, Z suffix block (k, r-level), rem (k,))
    root = (r, np.zeros((1, 0), dtype=np.int64), np.full(1, tf))
    stack = [root]
    while stack:
        lvl, zs, rem = stack.pop()
        if lvl == 0:
            zz = q * zs + pvec[None, :]
            val = np.einsum("ki,ij,kj->k", zz, gq, zz)
            keep = (val == cq) if eq_only else ((0 < val) & (val <= cq))
            if keep.any():
                results.append(zs[keep])
            continue
        i = lvl - 1
        cen = sigma[i] + (zs + sigma[i + 1:][None, :]) @ u[i, i + 1:]
        bound = np.maximum(rem + MARGIN, 0.0) / d[i]
        w = np.sqrt(bound)
        lo = np.ceil(-cen - w).astype(np.int64)
        hi = np.floor(-cen + w).astype(np.int64)
        width = np.maximum(hi - lo + 1, 0)
        total = int(width.sum())
        if total == 0:
            continue
        rows = np.repeat(np.arange(len(zs)), width)
        offs = np.arange(total) - np.repeat(np.cumsum(width) - width, width)
        zi = lo[rows] + offs
        y = zi + cen[rows]
        rem2 = rem[rows] - d[i] * y * y
        ok = rem2 >= -MARGIN
        rows, zi, rem2 = rows[ok], zi[ok], rem2[ok]
        znew = np.concatenate([zi[:, None], zs[rows]], axis=1)
        for s in range(0, len(znew), block):
            stack.append((i, znew[s:s + block], rem2[s:s + block]))
    if not results:
        return np.zeros((0, r), dtype=np.int64)
    return np.concatenate(results, axis=0)


def enumerate_coset(gram_num, gram_den: int, shift_num, shift_den: int,
                    target, eq_only: bool):
    """All integer z with (z + shift) G (z + shift)^T == target (or <=, > 0).

    gram = gram_num / gram_den (int64 matrix, denominator), positive
    definite; shift = shift_num / shift_den componentwise; target rational
    given as a Fraction-compatible value.  Returns an (n, r) int64 array of
    basis coordinates z.
    """
    from fractions import Fraction

    r = len(gram_num)
    if r == 0:
        return np.zeros((0, 0), dtype=np.int64)
    gq = np.asarray(gram_num, dtype=np.int64)
    q = int(shift_den)
    pvec = np.asarray(shift_num, dtype=np.int64)
    # scaled target: cq = q^2 * gram_den * target must be an integer
    cqf = Fraction(target) * gram_den * q * q
    if cqf.denominator != 1:
        # no solutions: form values on the coset never hit the target
        return np.zeros((0, r), dtype=np.int64)
    cq = int(cqf)
    if cq < 0:
        return np.zeros((0, r), dtype=np.int64)
    gmax = int(np.abs(gq).max()) if r else 1
    d, u = _float_cholesky(gq.astype(np.float64))
    sigma = pvec.astype(np.float64) / q
    # sound per-coordinate bound on visited z: w_j <= sqrt(T/d_j) + sum |u_jk| w_k
    tf = cq / (q * q) + MARGIN
    w = np.zeros(r)
    for j in reversed(range(r)):
        w[j] = np.sqrt(max(tf, 0.0) / d[j]) + np.abs(u[j, j + 1:]) @ w[j + 1:]
    zmax = float((w + np.abs(sigma) + 2.0).max())
    if 2.5 * (q * zmax) ** 2 * gmax * r > 2 ** 62:
        raise OverflowError("enumeration bounds exceed int64 range")

    if backend() == "numba":
        cap = 1 << 14
        while True:
            out = np.zeros((cap, r), dtype=np.int64)
            n = _dfs_kernel(d, u, sigma, gq, pvec, q, cq, eq_only, out)
            if n <= cap:
                return out[:n].copy()
            cap = max(cap * 2, n)
    return _bfs_numpy(d, u, sigma, gq, pvec, q, cq, eq_only)


def _float_cholesky(g):
    """(d, u) with Q(x) = sum d_i (x_i + sum_{j>i} u_ij x_j)^2, float64."""
    n = g.shape[0]
    a = g.copy()
    d = np.zeros(n)
    u = np.zeros((n, n))
    for i in range(n):
        d[i] = a[i, i]
        if d[i] <= 0:
            raise ValueError("form is not positive definite")
        u[i, i + 1:] = a[i, i + 1:] / d[i]
        a[i + 1:, i + 1:] -= d[i] * np.outer(u[i, i + 1:], u[i, i + 1:])
    return d, u
