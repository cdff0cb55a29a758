"""Core exact lattice primitives.

A lattice is a list of basis rows inside a rational inner-product space.
All structural computations (Gram matrices, normal forms, complements,
discriminant forms, the sign-flip involution on the polarization complement)
are exact; vector enumeration delegates to :mod:`qconics.kernels`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd

import numpy as np

from . import intmat, kernels
from .intmat import Q


class LatticeError(ValueError):
    pass


class NonSmoothPolarizationError(LatticeError):
    """Raised when the degree-0 wall set of a polarized lattice is nonempty."""


Vec = tuple
# vectors are tuples of Fractions in ambient coordinates


def vec(coords) -> Vec:
    return tuple(Q(x) for x in coords)


def vec_str(v) -> list[str]:
    return [str(x) for x in v]


@dataclass(frozen=True)
class AmbientSpace:
    dim: int
    form: tuple  # tuple of tuples of Fraction, symmetric

    @staticmethod
    def diagonal(dim: int, entry=1) -> "AmbientSpace":
        e = Q(entry)
        rows = tuple(tuple(e if i == j else Q(0) for j in range(dim)) for i in range(dim))
        return AmbientSpace(dim, rows)

    def __post_init__(self):
        form = tuple(tuple(Q(x) for x in row) for row in self.form)
        object.__setattr__(self, "form", form)
        if len(form) != self.dim or any(len(r) != self.dim for r in form):
            raise LatticeError("form size does not match dim")
        for i in range(self.dim):
            for j in range(i):
                if form[i][j] != form[j][i]:
                    raise LatticeError("form is not symmetric")

    def dot(self, x, y) -> Q:
        return sum(Q(a) * self.form[i][j] * Q(b)
                   for i, a in enumerate(x) if a
                   for j, b in enumerate(y) if b)

    @cached_property
    def _int_form(self):
        num, den = intmat.scale_to_int([list(r) for r in self.form])
        return np.array(num, dtype=np.int64), den


class Lattice:
    """Free Z-module given by independent basis rows in an ambient space."""

    def __init__(self, ambient: AmbientSpace, basis):
        self.ambient = ambient
        self.basis = tuple(vec(b) for b in basis)
        if any(len(b) != ambient.dim for b in self.basis):
            raise LatticeError("basis vector has wrong length")
        if self.basis and intmat.rank([list(b) for b in self.basis]) != len(self.basis):
            raise LatticeError("basis rows are dependent")

    @property
    def rank(self) -> int:
        return len(self.basis)

    @cached_property
    def gram(self):
        """Gram matrix of the basis as a tuple of tuples of Fractions."""
        bi, bden = self._int_basis
        fi, fden = self.ambient._int_form
        g = bi @ fi @ bi.T
        d = bden * bden * fden
        return tuple(tuple(Q(int(g[i, j]), d) for j in range(self.rank))
                     for i in range(self.rank))

    @cached_property
    def det(self) -> Q:
        if self.rank == 0:
            return Q(1)
        return intmat.det_q([list(r) for r in self.gram])

    @cached_property
    def _int_basis(self):
        """(int64 array of scaled basis rows, common denominator)."""
        num, den = intmat.scale_to_int([list(b) for b in self.basis]) if self.basis \
            else ([], 1)
        arr = np.array(num, dtype=np.int64).reshape(len(self.basis), self.ambient.dim)
        return arr, den

    @cached_property
    def _solver(self):
        """Exact batch-solve data: pivot columns and scaled inverse."""
        bi, bden = self._int_basis
        rows = [[int(x) for x in r] for r in bi]
        _, pivots = intmat.rref(rows)
        sub = [[Q(rows[i][c]) for c in pivots] for i in range(self.rank)]
        inv = intmat.inverse_q(sub)
        invnum, invden = intmat.scale_to_int(inv)
        return pivots, np.array(invnum, dtype=np.int64), invden, bden

    def coords_array(self, vectors_num: np.ndarray, vden: int):
        """Rational coordinates of many vectors (given as ints/vden).

        Returns (coeff numerators, common denominator, in_span mask); rows not
        in the rational span get arbitrary coefficients and mask False.
        """
        if self.rank == 0:
            mask = ~vectors_num.any(axis=1)
            return np.zeros((len(vectors_num), 0), dtype=np.int64), 1, mask
        pivots, invnum, invden, bden = self._solver
        bi, _ = self._int_basis
        # real coords = c / den with c below; (c/den) @ (bi/bden) == v/vden
        c = vectors_num[:, pivots] @ invnum * bden
        den = vden * invden
        lhs = c @ bi
        ok = (lhs * vden == vectors_num * (den * bden))
        mask = ok.all(axis=1)
        g = gcd(int(np.gcd.reduce(np.abs(c).ravel())) if c.size else 0, den)
        if g > 1:
            c //= g
            den //= g
        return c, den, mask

    def coords(self, v):
        """Exact rational coordinates of v in the basis, or None."""
        sol = intmat.solve_left([list(b) for b in self.basis], list(vec(v)))
        if sol is None:
            return None
        check = [sum(c * b[j] for c, b in zip(sol, self.basis)) for j in range(self.ambient.dim)]
        if any(Q(x) != Q(y) for x, y in zip(check, vec(v))):
            return None
        return sol

    def contains(self, v) -> bool:
        sol = self.coords(v)
        return sol is not None and all(c.denominator == 1 for c in sol)

    def contains_sublattice(self, other: "Lattice") -> bool:
        return all(self.contains(b) for b in other.basis)

    def dot(self, x, y) -> Q:
        return self.ambient.dot(x, y)

    @cached_property
    def is_even(self) -> bool:
        g = self.gram
        if any(g[i][j].denominator != 1 for i in range(self.rank) for j in range(self.rank)):
            return False
        return all(g[i][i] % 2 == 0 for i in range(self.rank))

    def canonical_basis(self):
        """HNF basis over the scaled-integer coordinate frame (for equality)."""
        bi, bden = self._int_basis
        h = intmat.hnf([[int(x) for x in r] for r in bi])
        return tuple(tuple(Q(x, bden) for x in row) for row in h)

    def same_lattice(self, other: "Lattice") -> bool:
        if self.ambient != other.ambient:
            return False
        a, b = self.canonical_basis(), other.canonical_basis()
        # canonical bases may carry different internal scales; compare exactly
        return a == b or [list(map(Q, r)) for r in a] == [list(map(Q, r)) for r in b]

    @cached_property
    def reduced_basis(self):
        """LLL-improved basis (same lattice), used for enumeration."""
        if self.rank <= 1:
            return self.basis
        t = intmat.lll_transform([list(r) for r in self.gram])
        return tuple(tuple(sum(Q(t[i][k]) * self.basis[k][j] for k in range(self.rank))
                           for j in range(self.ambient.dim))
                     for i in range(self.rank))

    def to_json(self) -> str:
        return json.dumps({
            "ambient": {"dim": self.ambient.dim,
                        "form": [vec_str(r) for r in self.ambient.form]},
            "basis": [vec_str(b) for b in self.basis],
        })

    @staticmethod
    def from_json(text: str) -> "Lattice":
        data = json.loads(text)
        amb = AmbientSpace(data["ambient"]["dim"],
                           tuple(tuple(Q(x) for x in row) for row in data["ambient"]["form"]))
        return Lattice(amb, [vec(b) for b in data["basis"]])

    def __repr__(self):
        return f"Lattice(rank={self.rank}, dim={self.ambient.dim}, det={self.det})"


@dataclass(frozen=True)
class PolarizedLattice:
    lattice: Lattice
    h: Vec

    def __post_init__(self):
        object.__setattr__(self, "h", vec(self.h))
        if not self.lattice.contains(self.h):
            raise LatticeError("h is not a lattice vector")
        if self.lattice.dot(self.h, self.h) != 4:
            raise LatticeError("h must have square 4")

    @property
    def ambient(self):
        return self.lattice.ambient


# ---------------------------------------------------------------------------
# basic operations


def gram_with_det(lat: Lattice):
    """Gram matrix and exact determinant of the basis."""
    return lat.gram, lat.det


def sublattice_from_coeffs(parent: Lattice, coeff_rows) -> Lattice:
    base = [tuple(sum(Q(c) * parent.basis[k][j] for k, c in enumerate(row))
                  for j in range(parent.ambient.dim))
            for row in coeff_rows]
    return Lattice(parent.ambient, base)


def saturate(s: Lattice, n: Lattice) -> Lattice:
    """Primitive closure n ∩ (Q·s) of a sublattice s of n."""
    coeffs = []
    for b in s.basis:
        c = n.coords(b)
        if c is None or any(x.denominator != 1 for x in c):
            raise LatticeError("sublattice is not contained in the ambient lattice")
        coeffs.append([int(x) for x in c])
    if not coeffs:
        return Lattice(n.ambient, [])
    sat = intmat.saturate_rows(coeffs)
    return sublattice_from_coeffs(n, sat)


def saturation_index(s: Lattice, n: Lattice) -> int:
    """Index of s inside its primitive closure in n."""
    coeffs = []
    for b in s.basis:
        c = n.coords(b)
        coeffs.append([int(x) for x in c])
    inv = intmat.invariant_factors(coeffs)
    out = 1
    for x in inv:
        out *= x
    return out


def orth_complement(s: Lattice, n: Lattice) -> Lattice:
    """{x in n : x ⊥ s}, a primitive sublattice of n."""
    if s.rank == 0:
        return n
    si, sden = s._int_basis
    ni, nden = n._int_basis
    fi, fden = n.ambient._int_form
    cross = ni @ fi @ si.T  # rank(n) x rank(s), scaled integers
    ker = intmat.int_right_kernel([[int(x) for x in row] for row in cross.T.tolist()])
    return sublattice_from_coeffs(n, ker)


def ort(s: PolarizedLattice, n: Lattice) -> PolarizedLattice:
    """(h^⊥ within s)^⊥ within n, polarized by the same h."""
    k = h_perp(s)
    comp = orth_complement(k, n)
    return PolarizedLattice(comp, s.h)


def h_perp(p: PolarizedLattice) -> Lattice:
    """{x in the lattice : x·h = 0}."""
    lat, h = p.lattice, p.h
    prods = [[lat.dot(b, h)] for b in lat.basis]
    num, _ = intmat.scale_to_int(prods)
    ker = intmat.int_right_kernel([[row[0] for row in num]])
    return sublattice_from_coeffs(lat, ker)


def h_even_part(p: PolarizedLattice) -> PolarizedLattice:
    """Index ≤ 2 sublattice where products with h are even."""
    lat, h = p.lattice, p.h
    par = [int(lat.dot(b, h)) % 2 for b in lat.basis]
    if any(lat.dot(b, h).denominator != 1 for b in lat.basis):
        raise LatticeError("products with h are not integral")
    if not any(par):
        return p
    i0 = par.index(1)
    coeffs = []
    for i in range(lat.rank):
        if i == i0:
            continue
        row = [0] * lat.rank
        row[i] = 1
        if par[i]:
            row[i0] = -1
        coeffs.append(row)
    row = [0] * lat.rank
    row[i0] = 2
    coeffs.append(row)
    sub = sublattice_from_coeffs(lat, intmat.hnf(coeffs))
    return PolarizedLattice(sub, h)


# ---------------------------------------------------------------------------
# enumeration wrappers


def _enum_in_basis(basis_rows, ambient: AmbientSpace, shift, target, eq_only):
    """Enumerate z with (z+shift)·G·(z+shift) = target in a basis frame.

    Returns int64 coefficient rows.  `shift` is a rational vector of basis
    coefficients; `basis_rows` must be positive definite under the ambient.
    """
    r = len(basis_rows)
    if r == 0:
        if (Q(target) == 0) if eq_only else False:
            return np.zeros((1, 0), dtype=np.int64)
        return np.zeros((0, 0), dtype=np.int64)
    work = Lattice(ambient, basis_rows)
    g = [list(row) for row in work.gram]
    gnum, gden = intmat.scale_to_int(g)
    qden = 1
    for x in shift:
        qden = qden * Q(x).denominator // gcd(qden, Q(x).denominator)
    pnum = [int(Q(x) * qden) for x in shift]
    return kernels.enumerate_coset(gnum, gden, pnum, qden, Q(target), eq_only)


def short_vectors_array(lat: Lattice, max_norm):
    """All vectors with 0 < x·x <= max_norm, as (int64 array, denominator).

    Rows are ambient coordinates divided by the common denominator, sorted
    lexicographically for determinism.
    """
    if lat.rank == 0:
        return np.zeros((0, lat.ambient.dim), dtype=np.int64), 1
    basis = lat.reduced_basis
    try:
        zs = _enum_in_basis(basis, lat.ambient, [Q(0)] * lat.rank, max_norm, eq_only=False)
    except ValueError as e:
        raise LatticeError(f"short_vectors needs a positive definite lattice: {e}")
    bnum, bden = intmat.scale_to_int([list(b) for b in basis])
    arr = zs @ np.array(bnum, dtype=np.int64)
    return _sort_rows(arr), bden


def short_vectors(lat: Lattice, max_norm) -> list:
    """All vectors with 0 < x·x <= max_norm (positive definite lattices)."""
    arr, den = short_vectors_array(lat, max_norm)
    return _rows_to_vecs(arr, den)


def _sort_rows(arr):
    if len(arr) == 0:
        return arr
    order = np.lexsort(arr.T[::-1])
    return arr[order]


def _rows_to_vecs(arr, den) -> list:
    if den == 1:
        return [tuple(map(int, row)) for row in arr.tolist()]
    return [tuple(Q(x, den) for x in row) for row in arr.tolist()]


def vectors_with_array(lat: Lattice, norm, w, dot):
    """{x in lat : x·x = norm, x·w = dot} as (int64 rows, denominator).

    Solved through the definite affine section orthogonal to w; also works
    when that section is negative definite (hyperbolic lattices).
    """
    w = vec(w)
    d = Q(dot)
    norm = Q(norm)
    prods = [lat.dot(b, w) for b in lat.basis]
    den = 1
    for x in prods + [d]:
        den = den * x.denominator // gcd(den, x.denominator)
    row = [int(x * den) for x in prods]
    dint = int(d * den)
    empty = np.zeros((0, lat.ambient.dim), dtype=np.int64), 1
    sol = _diophantine_row(row, dint)
    if sol is None:
        return empty
    ker = intmat.int_right_kernel([row]) if any(row) else intmat.identity(lat.rank)
    x0 = tuple(sum(Q(c) * lat.basis[k][j] for k, c in enumerate(sol))
               for j in range(lat.ambient.dim))
    ww = lat.dot(w, w)
    if ww == 0:
        raise LatticeError("section vector is isotropic")
    if not ker:
        if lat.dot(x0, x0) != norm:
            return empty
        num, xden = intmat.scale_to_int([list(x0)])
        return np.array(num, dtype=np.int64), xden
    kbasis = [tuple(sum(Q(c) * lat.basis[k][j] for k, c in enumerate(krow))
                    for j in range(lat.ambient.dim)) for krow in ker]
    kl = Lattice(lat.ambient, kbasis)
    positive = kl.gram[0][0] > 0
    # reduce the section basis (same lattice, better conditioned); negate the
    # Gram first when the section is negative definite
    kg = [list(r) for r in kl.gram] if positive else \
        [[-x for x in r] for r in kl.gram]
    t = intmat.lll_transform(kg)
    kbasis = [tuple(sum(Q(t[i][k]) * kbasis[k][j] for k in range(kl.rank))
                    for j in range(lat.ambient.dim)) for i in range(kl.rank)]
    proj = tuple(Q(a) - d / ww * Q(b) for a, b in zip(x0, w))
    sigma = intmat.solve_left([list(b) for b in kbasis], list(proj))
    target = norm - d * d / ww
    amb = lat.ambient
    if not positive:
        neg = AmbientSpace(amb.dim, tuple(tuple(-x for x in r) for r in amb.form))
        zs = _enum_in_basis(kbasis, neg, sigma, -target, eq_only=True)
    else:
        zs = _enum_in_basis(kbasis, amb, sigma, target, eq_only=True)
    kb_num, kb_den = intmat.scale_to_int([list(b) for b in kbasis])
    x0_num, x0_den = intmat.scale_to_int([list(x0)])
    den_all = kb_den * x0_den // gcd(kb_den, x0_den)
    arr = (zs @ np.array(kb_num, dtype=np.int64)) * (den_all // kb_den) \
        + np.array(x0_num, dtype=np.int64)[0] * (den_all // x0_den)
    # normalize the denominator
    if len(arr) and den_all > 1:
        g = den_all
        for x in np.unique(np.abs(arr)):
            g = gcd(g, int(x))
            if g == 1:
                break
        if g > 1:
            arr //= g
            den_all //= g
    return _sort_rows(arr), den_all


def vectors_with(lat: Lattice, norm, w, dot) -> list:
    """{x in lat : x·x = norm, x·w = dot} as coordinate tuples."""
    arr, den = vectors_with_array(lat, norm, w, dot)
    return _rows_to_vecs(arr, den)


def _diophantine_row(row, d):
    """Integer solution c of sum c_i row_i = d, or None."""
    g = 0
    for x in row:
        g = gcd(g, abs(x))
    if g == 0:
        return [0] * len(row) if d == 0 else None
    if d % g:
        return None
    # iterative extended gcd across the row
    coeff = [0] * len(row)
    cur_g = 0
    cur_coeff = []
    for i, x in enumerate(row):
        if cur_g == 0:
            cur_g, s = abs(x), (1 if x >= 0 else -1)
            cur_coeff = [0] * i + [s]
            continue
        g2, a, b = _xgcd(cur_g, x)
        cur_coeff = [a * c for c in cur_coeff] + [b]
        cur_g = g2
    mult = d // cur_g
    cur_coeff = [c * mult for c in cur_coeff]
    return cur_coeff + [0] * (len(row) - len(cur_coeff))


def _xgcd(a, b):
    if b == 0:
        return a, 1, 0
    g, x, y = _xgcd(b, a % b)
    return g, y, x - (a // b) * y


def is_root_free(lat: Lattice) -> bool:
    """True iff the (positive definite) lattice has no vectors of square 2."""
    if lat.rank == 0:
        return True
    basis = lat.reduced_basis
    zs = _enum_in_basis(basis, lat.ambient, [Q(0)] * lat.rank, 2, eq_only=True)
    return len(zs) == 0


def short_vectors_naive(lat: Lattice, max_norm) -> list:
    """Box-enumeration oracle (rank <= 4); exact Fraction arithmetic only."""
    r = lat.rank
    if r == 0:
        return []
    g = [list(row) for row in lat.gram]
    ginv = intmat.inverse_q(g)
    bounds = []
    for i in range(r):
        b = ginv[i][i] * Q(max_norm)
        k = 0
        while Q(k * k) <= b:
            k += 1
        bounds.append(k - 1)
    out = []
    import itertools
    for z in itertools.product(*[range(-b, b + 1) for b in bounds]):
        val = sum(Q(z[i]) * g[i][j] * Q(z[j]) for i in range(r) for j in range(r))
        if 0 < val <= Q(max_norm):
            out.append(tuple(sum(z[k] * lat.basis[k][j] for k in range(r))
                             for j in range(lat.ambient.dim)))
    return sorted(out)


# ---------------------------------------------------------------------------
# the sign-flip involution on h^⊥ and index-2 extensions


def mod_involution(p: PolarizedLattice) -> PolarizedLattice:
    """Flip the form on h^⊥ of the h-even part; involutive on h-even pairs.

    Products with h are preserved and x·y goes to (x·h)(y·h)/2 − x·y, so a
    hyperbolic input yields a positive definite output and vice versa.
    """
    pe = h_even_part(p)
    lat, h = pe.lattice, pe.h
    if lat.dot(h, h) != 4:
        raise LatticeError("h must have square 4 for the involution")
    k = h_perp(pe)
    kb = [list(b) for b in k.basis]
    kgram = k.gram
    r = k.rank
    form_rows = []
    for i in range(r + 1):
        row = []
        for j in range(r + 1):
            if i < r and j < r:
                row.append(-kgram[i][j])
            elif i == r and j == r:
                row.append(Q(4))
            else:
                row.append(Q(0))
        form_rows.append(tuple(row))
    amb = AmbientSpace(r + 1, tuple(form_rows))
    new_basis = []
    for b in lat.basis:
        a = lat.dot(b, h) / 4
        perp = tuple(Q(x) - a * Q(y) for x, y in zip(b, h))
        kappa = intmat.solve_left(kb, list(perp)) if r else []
        new_basis.append(tuple(kappa) + (a,))
    new_h = tuple([Q(0)] * r + [Q(1)])
    return PolarizedLattice(Lattice(amb, new_basis), new_h)


@dataclass(frozen=True)
class DiscriminantForm:
    invariant_factors: tuple
    generators: tuple  # ambient vectors in L ⊗ Q
    bilinear: tuple    # pairwise products mod 1, as Fractions in [0,1)
    quadratic: tuple   # squares mod 2, as Fractions in [0,2)

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def value_multiset(self, cap: int = 4096) -> tuple:
        """Sorted multiset of quadratic values over the whole group.

        A generator-independent invariant of the finite form; falls back to
        per-generator data above the group-size cap.
        """
        if self.order > cap:
            return ("generators",) + tuple(sorted(self.quadratic))
        import itertools
        vals = []
        ranges = [range(d) for d in self.invariant_factors]
        for coeffs in itertools.product(*ranges):
            q = Q(0)
            for i, ci in enumerate(coeffs):
                if ci:
                    q += ci * ci * self.quadratic[i]
                    for j in range(i + 1, len(coeffs)):
                        if coeffs[j]:
                            q += 2 * ci * coeffs[j] * self.bilinear[i][j]
            vals.append(q % 2)
        return tuple(sorted(vals))


def discriminant_form(lat: Lattice) -> DiscriminantForm:
    """Finite form L*/L of an integral lattice, via Smith normal form."""
    g = [list(row) for row in lat.gram]
    if any(x.denominator != 1 for row in g for x in row):
        raise LatticeError("lattice is not integral")
    gz = [[int(x) for x in row] for row in g]
    d, u, v = intmat.snf_with_transforms(gz)
    vinv = intmat.inverse_q(v)
    dual = intmat.mat_mul(intmat.inverse_q(g), [list(b) for b in lat.basis])
    gens, orders = [], []
    for i in range(lat.rank):
        di = d[i][i]
        if di in (0, 1):
            continue
        coeff = vinv[i]
        gvec = tuple(sum(Q(coeff[k]) * dual[k][j] for k in range(lat.rank))
                     for j in range(lat.ambient.dim))
        gens.append(gvec)
        orders.append(di)
    bil = tuple(tuple(lat.dot(gi, gj) % 1 for gj in gens) for gi in gens)
    quad = tuple(lat.dot(gi, gi) % 2 for gi in gens)
    return DiscriminantForm(tuple(orders), tuple(gens), bil, quad)


def h_odd_index2_extensions(p: PolarizedLattice, dedup_key=None) -> list:
    """Even index-2 overlattices containing a vector pairing oddly with h.

    Candidates come from isotropic order-2 discriminant classes; the result
    is deduplicated by (invariant factors, quadratic value multiset) plus an
    optional caller-supplied key.
    """
    lat, h = p.lattice, p.h
    if not lat.is_even:
        raise LatticeError("extension requires an even lattice")
    disc = discriminant_form(lat)
    two_idx = [i for i, d in enumerate(disc.invariant_factors) if d % 2 == 0]
    out, seen = [], set()
    import itertools
    for pick in itertools.product([0, 1], repeat=len(two_idx)):
        if not any(pick):
            continue
        gamma = [Q(0)] * lat.ambient.dim
        for b, i in zip(pick, two_idx):
            if b:
                half = disc.invariant_factors[i] // 2
                gamma = [g + half * x for g, x in zip(gamma, disc.generators[i])]
        gamma = tuple(gamma)
        if lat.dot(gamma, gamma) % 2 != 0:
            continue
        hp = lat.dot(gamma, h)
        if hp.denominator != 1 or int(hp) % 2 == 0:
            continue
        gden = 1
        for x in gamma:
            gden = gden * x.denominator // gcd(gden, x.denominator)
        _, bden = lat._int_basis
        scale = bden * gden // gcd(bden, gden)
        rows = [[int(Q(x) * scale) for x in b] for b in lat.basis]
        rows.append([int(x * scale) for x in gamma])
        ext_basis = [tuple(Q(x, scale) for x in row) for row in intmat.hnf(rows)]
        ext = Lattice(lat.ambient, ext_basis)
        if not ext.is_even:
            continue
        ext_disc = discriminant_form(ext)
        key = (ext_disc.invariant_factors, ext_disc.value_multiset())
        if dedup_key is not None:
            key = key + (dedup_key(PolarizedLattice(ext, h)),)
        if key in seen:
            continue
        seen.add(key)
        out.append(PolarizedLattice(ext, h))
    return out


# ---------------------------------------------------------------------------
# wall sets of a hyperbolic polarized lattice


@dataclass(frozen=True)
class FanoWalls:
    lines: tuple
    conics_all: tuple
    conics_irreducible: tuple

    @property
    def counts(self):
        return (len(self.lines), len(self.conics_irreducible), len(self.conics_all))

    @property
    def reducible_count(self) -> int:
        return len(self.conics_all) - len(self.conics_irreducible)


def vinberg_fano(p: PolarizedLattice) -> FanoWalls:
    """Degree 1 and 2 wall sets of a hyperbolic 4-polarized lattice.

    Raises NonSmoothPolarizationError when square −2 vectors orthogonal to h
    exist.  Vectors of square −2 with x·h = n are enumerated through the
    negative definite affine section x = (n/4)h + y.
    """
    lat, h = p.lattice, p.h
    k = h_perp(p)
    if k.rank:
        kg = [[-x for x in row] for row in k.gram]
        try:
            intmat.gram_cholesky(kg)
        except ValueError:
            raise LatticeError("lattice is not hyperbolic with respect to h")
    delta0 = vectors_with(lat, -2, h, 0)
    if delta0:
        raise NonSmoothPolarizationError(
            f"{len(delta0)} square −2 classes orthogonal to h")
    lines = sorted(vectors_with(lat, -2, h, 1))
    conics = sorted(vectors_with(lat, -2, h, 2))
    if lines and conics:
        li, lden = intmat.scale_to_int([list(v) for v in lines])
        ci, cden = intmat.scale_to_int([list(v) for v in conics])
        fi, fden = lat.ambient._int_form
        prods = np.array(ci, dtype=np.int64) @ fi @ np.array(li, dtype=np.int64).T
        keep = (prods >= 0).all(axis=1)
        irr = [c for c, k2 in zip(conics, keep) if k2]
    else:
        irr = list(conics)
    return FanoWalls(tuple(lines), tuple(conics), tuple(irr))
