"""Exact integer and rational matrix routines.

Everything here works on plain Python lists (rows of ints or Fractions), so
all results are exact.  Sizes stay small (ambient dimension at most 33), which
keeps the classical algorithms comfortably fast.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

Q = Fraction

MatZ = list  # list[list[int]]
MatQ = list  # list[list[Fraction]]


def identity(n: int) -> MatZ:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    """Exact matrix product (works for int and Fraction entries)."""
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def transpose(a):
    return [list(row) for row in zip(*a)]


def scale_to_int(rows) -> tuple[MatZ, int]:
    """Clear denominators; return (integer matrix, common denominator)."""
    den = 1
    for row in rows:
        for x in row:
            f = Q(x)
            den = den * f.denominator // gcd(den, f.denominator)
    out = [[int(Q(x) * den) for x in row] for row in rows]
    return out, den


def rref(rows: MatQ) -> tuple[MatQ, list[int]]:
    """Reduced row echelon form over Q; returns (rref rows, pivot columns)."""
    m = [[Q(x) for x in row] for row in rows]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        pr = next((i for i in range(r, nr) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = m[r][c]
        m[r] = [x / inv for x in m[r]]
        for i in range(nr):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return m[:r], pivots


def rank(rows) -> int:
    if not rows:
        return 0
    return len(rref(rows)[0])


def solve_left(basis, target):
    """Solve x * basis = target over Q; None if inconsistent.

    `basis` rows need not be independent; any solution is returned.
    """
    nr = len(basis)
    if nr == 0:
        return [] if all(Q(t) == 0 for t in target) else None
    nc = len(basis[0])
    # Augment with coefficient tracking: reduce [basis | I].
    aug = [[Q(x) for x in row] + [Q(1 if i == j else 0) for j in range(nr)]
           for i, row in enumerate(basis)]
    red, pivots = rref(aug)
    # Pivots inside the basis part give the row space; express target.
    t = [Q(x) for x in target]
    coeffs = [Q(0)] * nr
    for row, p in zip(red, pivots):
        if p >= nc:
            continue
        if t[p] != 0:
            f = t[p]
            for j in range(nc):
                t[j] -= f * row[j]
            for j in range(nr):
                coeffs[j] += f * row[nc + j]
    if any(x != 0 for x in t):
        return None
    return coeffs


def in_rowspan(basis, target) -> bool:
    return solve_left(basis, target) is not None


def kernel_q(rows) -> MatQ:
    """Basis of the right kernel {x : rows @ x = 0} over Q."""
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    red, pivots = rref(rows)
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for f in free:
        v = [Q(0)] * nc
        v[f] = Q(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def _row_gcd_reduce(row):
    g = 0
    for x in row:
        g = gcd(g, abs(x))
    if g > 1:
        return [x // g for x in row]
    return list(row)


def int_right_kernel(rows: MatZ) -> MatZ:
    """Basis of the full integer kernel {x in Z^n : rows @ x = 0}.

    Computed through the Smith normal form U @ rows @ V = D: the columns of
    V beyond the nonzero part of D span the kernel saturately because V is
    unimodular.
    """
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    if nr == 0 or nc == 0:
        return identity(nc)
    d, _, v = snf_with_transforms(rows)
    r = sum(1 for i in range(min(nr, nc)) if d[i][i] != 0)
    cols = list(zip(*v))
    return hnf([list(cols[j]) for j in range(r, nc)])


def hnf(rows: MatZ, chunk: int = 64) -> MatZ:
    """Row-style Hermite normal form (canonical basis of the row lattice).

    Pivots are positive, entries above each pivot reduced into [0, pivot).
    Zero rows are dropped.  Rows are folded in chunks so large generating
    sets reduce against an already-canonical basis.
    """
    m = [list(map(int, r)) for r in rows if any(r)]
    if not m:
        return []
    nc = len(m[0])
    basis: list[list[int]] = []
    for start in range(0, len(m), chunk):
        basis = _hnf_pass(basis + m[start:start + chunk], nc)
    return basis


def _hnf_pass(rows, nc):
    work = [r for r in rows if any(r)]
    res: list[list[int]] = []
    col = 0
    while work and col < nc:
        active = [r for r in work if r[col] != 0]
        rest = [r for r in work if r[col] == 0]
        if not active:
            col += 1
            continue
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            piv = active[0]
            nxt = []
            for r in active[1:]:
                q = r[col] // piv[col]
                rr = [a - q * b for a, b in zip(r, piv)]
                if rr[col] != 0:
                    nxt.append(rr)
                elif any(rr):
                    rest.append(rr)
            active = [piv] + nxt
        piv = active[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        res.append(piv)
        work = rest
        col += 1
    # Reduce entries above pivots, left to right so each pivot column stays
    # canonical once processed.
    for i in range(len(res)):
        p = next(j for j, x in enumerate(res[i]) if x != 0)
        for k in range(i):
            q = res[k][p] // res[i][p]
            if q:
                res[k] = [a - q * b for a, b in zip(res[k], res[i])]
    return res


def saturate_rows(rows: MatZ) -> MatZ:
    """Primitive closure of the row lattice inside Z^n (HNF basis)."""
    m = [r for r in rows if any(r)]
    if not m:
        return []
    ker = int_right_kernel(m)
    if not ker:
        n = len(m[0])
        return identity(n)
    return int_right_kernel(ker)


def det_bareiss(mat: MatZ) -> int:
    """Fraction-free determinant of an integer matrix."""
    n = len(mat)
    if n == 0:
        return 1
    m = [list(map(int, r)) for r in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if sw is None:
                return 0
            m[k], m[sw] = m[sw], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def det_cofactor(mat) -> int:
    """Determinant by cofactor expansion (independent cross-check, small n)."""
    n = len(mat)
    cols = tuple(range(n))
    from functools import lru_cache

    @lru_cache(maxsize=None)
    def rec(row: int, cs: tuple) -> object:
        if not cs:
            return 1
        total = 0
        sign = 1
        for k, c in enumerate(cs):
            a = mat[row][c]
            if a:
                total += sign * a * rec(row + 1, cs[:k] + cs[k + 1:])
            sign = -sign
        return total

    return rec(0, cols)


def det_q(mat: MatQ) -> Q:
    m, den = scale_to_int(mat)
    return Q(det_bareiss(m), den ** len(mat))


def inverse_q(mat) -> MatQ:
    """Exact inverse of a nonsingular rational matrix."""
    n = len(mat)
    aug = [[Q(x) for x in row] + [Q(1 if i == j else 0) for j in range(n)]
           for i, row in enumerate(mat)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def snf_with_transforms(mat: MatZ) -> tuple[MatZ, MatZ, MatZ]:
    """Smith normal form: returns (D, U, V) with U @ mat @ V = D diagonal.

    Delegates to sympy's fraction-free implementation, which controls the
    interior coefficient growth a naive pivoting scheme suffers from.
    """
    from sympy import Matrix, ZZ
    from sympy.polys.matrices import DomainMatrix
    from sympy.polys.matrices.normalforms import smith_normal_decomp

    nr = len(mat)
    nc = len(mat[0]) if nr else 0
    if nr == 0 or nc == 0:
        return [list(map(int, r)) for r in mat], identity(nr), identity(nc)
    dm = DomainMatrix.from_Matrix(Matrix([list(map(int, r)) for r in mat]))
    d, u, v = smith_normal_decomp(dm.convert_to(ZZ))
    to_list = lambda m: [[int(x) for x in row] for row in m.to_Matrix().tolist()]
    return to_list(d), to_list(u), to_list(v)


def invariant_factors(mat: MatZ) -> list[int]:
    """Nonzero diagonal of the Smith form (no transforms)."""
    from sympy import Matrix, ZZ
    from sympy.polys.matrices import DomainMatrix
    from sympy.polys.matrices.normalforms import smith_normal_form

    if not mat or not mat[0]:
        return []
    dm = DomainMatrix.from_Matrix(Matrix([list(map(int, r)) for r in mat]))
    d = smith_normal_form(dm.convert_to(ZZ)).to_Matrix().tolist()
    out = [int(d[i][i]) for i in range(min(len(d), len(d[0])))]
    return [x for x in out if x != 0]


def _rank_mod_p(mat: MatZ, p: int) -> int:
    import numpy as np

    a = np.array([[x % p for x in row] for row in mat], dtype=np.int64)
    nr, nc = a.shape
    r = 0
    for c in range(nc):
        piv = None
        for i in range(r, nr):
            if a[i, c] % p:
                piv = i
                break
        if piv is None:
            continue
        a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = a[r] * inv % p
        for i in range(nr):
            if i != r and a[i, c]:
                a[i] = (a[i] - a[i, c] * a[r]) % p
        r += 1
        if r == nr:
            break
    return r


def quotient_is_cyclic(mat: MatZ) -> bool:
    """Whether Z^n / rowspan(mat) is cyclic, for a full-rank square matrix.

    Equivalent to rank_p(mat) >= n-1 at every prime p dividing det; avoids
    computing a full Smith form.
    """
    n = len(mat)
    d = abs(det_bareiss(mat))
    if d == 0:
        raise ValueError("quotient is infinite")
    if d == 1:
        return True
    rem = d
    primes = []
    f = 2
    while f * f <= rem and f < 1_000_000:
        if rem % f == 0:
            primes.append(f)
            while rem % f == 0:
                rem //= f
        f += 1 if f == 2 else 2
    if rem > 1:
        if rem < 1_000_000_000_000:
            primes.append(rem)  # prime by trial division bound
        else:
            inv = invariant_factors(mat)
            return sum(1 for x in inv if x > 1) <= 1
    return all(_rank_mod_p(mat, p) >= n - 1 for p in primes)


def gram_cholesky(gram: MatQ):
    """Exact Cholesky data (d, u) of a positive definite rational Gram matrix.

    Q(x) = sum_i d[i] * (x_i + sum_{j>i} u[i][j] x_j)^2.
    Raises ValueError if the form is not positive definite.
    """
    n = len(gram)
    a = [[Q(x) for x in row] for row in gram]
    d = [Q(0)] * n
    u = [[Q(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = a[i][i]
        if d[i] <= 0:
            raise ValueError("form is not positive definite")
        for j in range(i + 1, n):
            u[i][j] = a[i][j] / d[i]
        for j in range(i + 1, n):
            for k in range(j, n):
                a[j][k] -= u[i][j] * d[i] * u[i][k]
                a[k][j] = a[j][k]
    return d, u


def lll_transform(gram: MatQ, delta: float = 0.99, max_ops: int | None = None) -> MatZ:
    """LLL reduction transform for a positive definite Gram matrix.

    Returns an integer unimodular T; the reduced basis is T applied to the
    old one.  Floats only steer which integer row operations are applied, so
    T spans the same lattice no matter how the rounding goes; exact callers
    recompute the Gram matrix of the new basis themselves.  Incremental
    mu/B* updates in the style of Cohen's Algorithm 2.6.3; an operation cap
    guarantees termination.
    """
    import numpy as np

    n = len(gram)
    if n <= 1:
        return identity(n)
    g0 = np.array([[float(x) for x in row] for row in gram], dtype=np.float64)
    t = np.eye(n, dtype=np.int64)
    if max_ops is None:
        max_ops = 40000 * n

    def dot(i, j):
        return float(t[i] @ g0 @ t[j])

    mu = np.zeros((n, n))
    b = np.zeros(n)

    def gso_row(i):
        b[i] = dot(i, i)
        for j in range(i):
            mu[i, j] = (dot(i, j) - (mu[i, :j] * mu[j, :j] * b[:j]).sum()) / b[j]
            b[i] -= mu[i, j] ** 2 * b[j]

    for i in range(n):
        gso_row(i)

    ops = 0

    def reduce_pair(k, l):
        nonlocal ops
        q = round(mu[k, l])
        if q:
            t[k] -= q * t[l]
            mu[k, :l] -= q * mu[l, :l]
            mu[k, l] -= q
            ops += 1

    k = 1
    while k < n and ops < max_ops:
        reduce_pair(k, k - 1)
        if b[k] >= (delta - mu[k, k - 1] ** 2) * b[k - 1] or b[k - 1] <= 0:
            for l in reversed(range(k - 1)):
                reduce_pair(k, l)
            k += 1
        else:
            # swap rows k-1, k and patch the GSO data
            m = mu[k, k - 1]
            bb = b[k] + m * m * b[k - 1]
            t[[k - 1, k]] = t[[k, k - 1]]
            mu[[k - 1, k], :k - 1] = mu[[k, k - 1], :k - 1]
            if bb <= 0:
                gso_row(k - 1)
                gso_row(k)
            else:
                mu[k, k - 1] = m * b[k - 1] / bb
                bnew = b[k - 1] * b[k] / bb
                b[k - 1] = bb
                b[k] = bnew
                for i in range(k + 1, n):
                    tmp = mu[i, k]
                    mu[i, k] = mu[i, k - 1] - m * tmp
                    mu[i, k - 1] = tmp + mu[k, k - 1] * mu[i, k]
            ops += 1
            k = max(k - 1, 1)
    return [list(map(int, row)) for row in t]
