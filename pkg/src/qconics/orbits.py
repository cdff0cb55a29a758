"""Conic sets in 4-polarized lattices and their invariants.

A conic is a lattice vector l with l·l = 4 and l·h = 2.  Sets of conics are
held as scaled integer coordinate arrays; spans, saturations, admissibility
and the intersection multigraph are all computed exactly.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd

import numpy as np

from . import intmat, niemeier
from .intmat import Q
from .lattice import (Lattice, LatticeError, PolarizedLattice, saturate,
                      is_root_free, vec, vectors_with_array)


class ConfigError(ValueError):
    pass


def _common_den(*dens: int) -> int:
    d = 1
    for x in dens:
        d = d * x // gcd(d, x)
    return d


def _rescale(arr, den, target) -> np.ndarray:
    assert target % den == 0
    return arr * (target // den)


def _vec_scaled(v, den) -> np.ndarray:
    out = [Q(x) * den for x in v]
    if any(x.denominator != 1 for x in out):
        raise LatticeError("vector does not fit the working scale")
    return np.array([int(x) for x in out], dtype=np.int64)


class ConicSet:
    """A finite set of conics with cached span data, canonically ordered."""

    def __init__(self, pol: PolarizedLattice, arr: np.ndarray, den: int):
        self.pol = pol
        if len(arr):
            order = np.lexsort(arr.T[::-1])
            arr = arr[order]
        self.arr = arr
        self.den = den

    def __len__(self):
        return len(self.arr)

    @cached_property
    def _row_set(self):
        return {tuple(r) for r in self.arr.tolist()}

    @cached_property
    def h_scaled(self) -> np.ndarray:
        return _vec_scaled(self.pol.h, self.den)

    def vectors(self) -> list:
        if self.den == 1:
            return [tuple(map(int, r)) for r in self.arr.tolist()]
        return [tuple(Q(x, self.den) for x in r) for r in self.arr.tolist()]

    def subset(self, mask) -> "ConicSet":
        return ConicSet(self.pol, self.arr[mask], self.den)

    def dual(self) -> "ConicSet":
        return ConicSet(self.pol, self.h_scaled[None, :] - self.arr, self.den)

    def is_self_dual(self) -> bool:
        rows = self._row_set
        return all(tuple(r) in rows for r in (self.h_scaled[None, :] - self.arr).tolist())

    def contains_set(self, other: "ConicSet") -> bool:
        if self.pol.lattice is not other.pol.lattice or self.pol.h != other.pol.h:
            raise LatticeError("conic sets live in different polarized lattices")
        den = _common_den(self.den, other.den)
        mine = {tuple(r) for r in _rescale(self.arr, self.den, den).tolist()}
        return all(tuple(r) in mine
                   for r in _rescale(other.arr, other.den, den).tolist())

    @cached_property
    def span_z(self) -> Lattice:
        """spnZ = Z·conics + Z·h."""
        rows = np.vstack([self.arr, self.h_scaled[None, :]])
        basis = intmat.hnf([list(map(int, r)) for r in rows])
        return Lattice(self.pol.ambient,
                       [tuple(Q(x, self.den) for x in row) for row in basis])

    @cached_property
    def span(self) -> Lattice:
        """Primitive closure of spnZ inside the ambient lattice."""
        return saturate(self.span_z, self.pol.lattice)

    @property
    def rank(self) -> int:
        return self.span_z.rank

    def saturation(self) -> "ConicSet":
        """Orb_h ∩ spn, computed against the full conic orbit."""
        orb = enumerate_orb(self.pol)
        den = _common_den(orb.den, self.den)
        sp_num, _ = intmat.scale_to_int([list(b) for b in self.span_z.basis])
        w = intmat.int_right_kernel(sp_num)
        if not w:
            return orb
        warr = np.array(w, dtype=np.int64)
        keep = (orb.arr @ warr.T == 0).all(axis=1)
        return ConicSet(self.pol, _rescale(orb.arr[keep], orb.den, den), den)

    def is_saturated(self) -> bool:
        return len(self.saturation()) == len(self)

    @cached_property
    def span_h_even(self) -> bool:
        return all(self.span.dot(b, self.pol.h) % 2 == 0 for b in self.span.basis)

    def is_admissible(self) -> bool:
        """spn is h-even and contains no square-2 vector."""
        return self.span_h_even and is_root_free(self.span)

    @cached_property
    def gram_scaled(self):
        """(products * mult, mult): integer pairwise product data."""
        fi, fden = self.pol.ambient._int_form
        g = self.arr @ fi @ self.arr.T
        return g, self.den * self.den * fden

    def multiplicity_matrix(self) -> np.ndarray:
        """Edge multiplicities 2 − l_i·l_j, validated, zero diagonal."""
        g, mden = self.gram_scaled
        if np.any(g % mden):
            raise LatticeError("non-integral conic products")
        prod = g // mden
        off = ~np.eye(len(self.arr), dtype=bool)
        vals = set(np.unique(prod[off]).tolist()) if len(self.arr) > 1 else set()
        if not vals <= {-2, 0, 1, 2}:
            raise LatticeError(f"conic products {sorted(vals)} outside the "
                               "root-free range (non-admissible input)")
        m = 2 - prod
        np.fill_diagonal(m, 0)
        return m.astype(np.int64)


_ORB_CACHE: dict = {}


def enumerate_orb(pol: PolarizedLattice) -> ConicSet:
    """All l with l·l = 4, l·h = 2; cached per polarized lattice."""
    key = (id(pol.lattice), pol.h)
    if key not in _ORB_CACHE:
        arr, den = vectors_with_array(pol.lattice, 4, pol.h, 2)
        _ORB_CACHE[key] = ConicSet(pol, arr, den)
    return _ORB_CACHE[key]


# ---------------------------------------------------------------------------
# configuration files


#: pictograph alphabets: glyph -> coefficient
FRAME_A1 = {"*": Q(1), "o": Q(-1), "-": Q(1, 2), "=": Q(-1, 2), "+": Q(3, 2),
            ".": Q(0)}
FRAME_LEECH = {"*": Q(4), "o": Q(-4), "!": Q(-4), "+": Q(2), "-": Q(-2),
               ".": Q(0)}


@dataclass(frozen=True)
class Configuration:
    lattice_id: str
    frame: str
    generators: tuple  # ambient vectors, first is h
    expect: int | None = None

    @property
    def h(self):
        return self.generators[0]


def _decode_line(text: str, frame: str, dim: int, lineno: int):
    if frame == "plain":
        parts = text.split()
        if len(parts) != dim:
            raise ConfigError(f"line {lineno}: expected {dim} coordinates, "
                              f"got {len(parts)}")
        try:
            return tuple(Q(p) for p in parts)
        except (ValueError, ZeroDivisionError) as e:
            raise ConfigError(f"line {lineno}: bad rational ({e})")
    alphabet = FRAME_A1 if frame == "a1" else FRAME_LEECH
    text = text.strip()
    if not text:
        raise ConfigError(f"line {lineno}: empty pictograph")
    if len(text) > dim:
        raise ConfigError(f"line {lineno}: pictograph longer than {dim}")
    # a1 displays extend their last glyph; leech displays pad with zeroes
    pad = text[-1] if frame == "a1" else "."
    text = text + pad * (dim - len(text))
    coeffs = []
    for col, ch in enumerate(text, 1):
        if ch not in alphabet:
            raise ConfigError(f"line {lineno}, column {col}: unknown glyph "
                              f"'{ch}' for frame {frame}")
        coeffs.append(alphabet[ch])
    return tuple(coeffs)


def parse_configuration(text: str, name: str = "<config>") -> Configuration:
    lattice_id = frame = None
    hline = None
    gens = []
    expect = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if ":" not in line:
            raise ConfigError(f"{name}, line {lineno}: expected 'key: value'")
        key, _, value = line.partition(":")
        key = key.strip().lower()
        value = value.strip()
        if key == "lattice":
            lattice_id = value
        elif key == "frame":
            frame = value.lower()
        elif key == "h":
            hline = (value, lineno)
        elif key == "gen":
            gens.append((value, lineno))
        elif key == "expect":
            expect = int(value)
        else:
            raise ConfigError(f"{name}, line {lineno}: unknown key '{key}'")
    if lattice_id is None or frame is None or hline is None:
        raise ConfigError(f"{name}: lattice, frame and h are required")
    if frame not in ("a1", "leech", "plain"):
        raise ConfigError(f"{name}: unknown frame '{frame}'")
    lat = niemeier.build_niemeier(lattice_id if lattice_id != "leech" else "leech")
    dim = lat.ambient.dim
    decoded = [_decode_line(hline[0], frame, dim, hline[1])]
    decoded += [_decode_line(v, frame, dim, ln) for v, ln in gens]
    for i, g in enumerate(decoded):
        if not lat.contains(g):
            raise ConfigError(f"{name}: generator {i} does not lie in "
                              f"{lattice_id} (decode error)")
    cfg = Configuration(lattice_id, frame, tuple(vec(g) for g in decoded), expect)
    if lat.dot(cfg.h, cfg.h) != 4:
        raise ConfigError(f"{name}: h has square {lat.dot(cfg.h, cfg.h)} != 4")
    return cfg


def load_configuration(path) -> Configuration:
    with open(path, "r", encoding="utf-8") as f:
        return parse_configuration(f.read(), str(path))


def conics_of_configuration(cfg: Configuration) -> ConicSet:
    """Conics l satisfying 2·l·v = h·v for every generator v beyond h."""
    lat = niemeier.build_niemeier(cfg.lattice_id)
    pol = PolarizedLattice(lat, cfg.h)
    orb = enumerate_orb(pol)
    keep = np.ones(len(orb), dtype=bool)
    fi, fden = lat.ambient._int_form
    for v in cfg.generators[1:]:
        vden = 1
        for x in v:
            vden = _common_den(vden, Q(x).denominator)
        vi = _vec_scaled(v, vden)
        lhs = 2 * (orb.arr @ fi @ vi)          # scaled by orb.den * vden * fden
        hv = lat.dot(cfg.h, v)                 # exact rational
        rhs = Q(hv) * orb.den * vden * fden
        if rhs.denominator != 1:
            keep &= False
            break
        keep &= lhs == int(rhs)
    return orb.subset(keep)


# ---------------------------------------------------------------------------
# multigraph fingerprints


@dataclass(frozen=True)
class Fingerprint:
    size: int
    digest: str

    def __eq__(self, other):
        return (self.size, self.digest) == (other.size, other.digest)

    def __hash__(self):
        return hash((self.size, self.digest))


def _wl_labels(mult: np.ndarray, rounds: int = 8):
    """Iterated neighbourhood refinement labels for an edge-coloured graph."""
    n = len(mult)
    labels = np.zeros(n, dtype=np.int64)
    # initial label: degree profile per multiplicity
    init = {}
    for i in range(n):
        prof = tuple(sorted((int(v), int(c)) for v, c in
                            zip(*np.unique(mult[i], return_counts=True)) if v))
        labels[i] = init.setdefault(prof, len(init))
    nclasses = len(init)
    for _ in range(rounds):
        shifted = labels[None, :] * 8 + mult  # mult values are 0..4
        sig = {}
        new = np.zeros(n, dtype=np.int64)
        for i in range(n):
            vals, cnts = np.unique(shifted[i][mult[i] != 0], return_counts=True)
            key = (int(labels[i]), tuple(map(int, vals)), tuple(map(int, cnts)))
            new[i] = sig.setdefault(key, len(sig))
        if len(sig) == nclasses:
            labels = new
            break
        labels, nclasses = new, len(sig)
    # canonical form: multiset of (class signature) independent of numbering
    groups = {}
    for i in range(n):
        groups.setdefault(int(labels[i]), []).append(i)
    return labels, sorted(len(g) for g in groups.values())


def _restricted_charpoly(cs: ConicSet):
    """Characteristic polynomial of the multiplicity matrix, exactly.

    M = 2I + 2J − P with P the conic Gram matrix; M acts as multiplication
    by 2 off the span of the coordinate columns and the all-ones vector, so
    charpoly(M) = (x−2)^(n−d) · charpoly(M|W) with d = dim W small.
    """
    import sympy

    n = len(cs)
    x = np.hstack([cs.arr, np.ones((n, 1), dtype=np.int64)])
    _, col_piv = intmat.rref([list(map(int, r)) for r in x.tolist()])
    u = x[:, col_piv]                       # n × d, full column rank
    dd = u.shape[1]
    fi, fden = cs.pol.ambient._int_form
    mden = cs.den * cs.den * fden
    gu = (cs.arr @ fi @ (cs.arr.T @ u))
    assert not np.any(gu % mden)
    mu = 2 * u + 2 * np.ones((n, 1), dtype=np.int64) @ (np.ones((1, n), dtype=np.int64) @ u) \
        - gu // mden
    # pick d independent rows of u
    _, row_piv = intmat.rref([list(map(int, r)) for r in u.T.tolist()])
    us = [[int(u[i, j]) for j in range(dd)] for i in row_piv]
    ms = [[int(mu[i, j]) for j in range(dd)] for i in row_piv]
    r = intmat.mat_mul(intmat.inverse_q(us), ms)
    lam = sympy.Symbol("x")
    m = sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction)
                       else c for c in row] for row in r])
    poly = m.charpoly(lam)
    coeffs = [int(c) for c in poly.all_coeffs()]
    return n - dd, coeffs


def node_key(cs: ConicSet):
    """Cheap isomorphism-invariant key for descent bookkeeping.

    Tolerates arbitrary conic products (descent intermediates need not be
    admissible): hashes the sorted per-vertex product profiles.
    """
    g, mden = cs.gram_scaled
    assert not np.any(g % mden)
    prod = (g // mden).astype(np.int64)
    np.fill_diagonal(prod, 9)
    prof = np.sort(prod, axis=1)
    order = np.lexsort(prof.T)
    payload = prof[order].tobytes()
    return (len(cs), cs.rank, hashlib.sha256(payload).hexdigest())


def fingerprint(cs: ConicSet) -> Fingerprint:
    """Isomorphism-invariant fingerprint of the conic multigraph.

    Combines per-multiplicity degree data, stable refinement class sizes and
    the exact characteristic polynomial of the multiplicity matrix; equal
    for isomorphic graphs, a necessary condition only in the other direction.
    """
    cached = getattr(cs, "_fp", None)
    if cached is not None:
        return cached
    n = len(cs)
    if n == 0:
        fp = Fingerprint(0, hashlib.sha256(b"empty").hexdigest())
        cs._fp = fp
        return fp
    mult = cs.multiplicity_matrix()
    labels, class_sizes = _wl_labels(mult)
    deg = sorted(tuple(int((mult[i] == v).sum()) for v in (1, 2, 4))
                 for i in range(n))
    shift, coeffs = _restricted_charpoly(cs)
    payload = repr((n, deg, class_sizes, shift, coeffs)).encode()
    fp = Fingerprint(n, hashlib.sha256(payload).hexdigest())
    cs._fp = fp
    return fp


def is_isomorphic(a: ConicSet, b: ConicSet, budget: int = 200000) -> bool:
    """Backtracking multigraph isomorphism with refinement pruning.

    Exact when it finishes within the node budget; raises RuntimeError when
    the budget is exhausted.
    """
    if len(a) != len(b):
        return False
    ma, mb = a.multiplicity_matrix(), b.multiplicity_matrix()
    la, _ = _wl_labels(ma)
    lb, _ = _wl_labels(mb)
    if sorted(np.unique(la, return_counts=True)[1].tolist()) != \
       sorted(np.unique(lb, return_counts=True)[1].tolist()):
        return False
    n = len(a)
    # relabel classes canonically by (size, signature)
    order = np.argsort(la, kind="stable")
    nodes = 0

    def extend(mapping, used):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise RuntimeError("isomorphism budget exhausted")
        k = len(mapping)
        if k == n:
            return True
        i = int(order[k])
        for j in range(n):
            if used[j] or lb[j] != la[i]:
                continue
            if all(mb[j, mapping[p]] == ma[i, p] for p in mapping):
                mapping[i] = j
                used[j] = True
                if extend(mapping, used):
                    return True
                del mapping[i]
                used[j] = False
        return False

    return extend({}, [False] * n)
