"""Iterated index-2 descent through conic spans.

Starting from the full conic orbit, children are cut out by mod-2
functionals on the integral span that annihilate the polarization class;
rank and saturation tracking discard dead branches, and surviving saturated
sets are collected up to graph-fingerprint equivalence.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from . import intmat, orbits
from .intmat import Q
from .lattice import Lattice, LatticeError, PolarizedLattice
from .orbits import ConicSet, enumerate_orb, fingerprint, node_key


class FunctionalSpaceTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class F2Data:
    """Mod-2 picture of the integral span of a conic set."""
    basis: tuple          # HNF basis rows of spnZ (scaled by den)
    den: int
    dim: int              # rank of the span = F2 dimension
    h_bits: int           # class of h
    conic_bits: np.ndarray  # one mask per conic


def f2_reduce(cs: ConicSet) -> F2Data:
    span = cs.span_z
    coords, den, ok = span.coords_array(cs.arr, cs.den)
    if not ok.all():
        raise LatticeError("conic outside its own integral span")
    assert den == 1 or not np.any(coords % den), "span coordinates not integral"
    coords = coords // den if den != 1 else coords
    bits = (coords % 2).astype(np.int64)
    masks = (bits * (1 << np.arange(span.rank, dtype=np.int64))).sum(axis=1)
    hc = span.coords(cs.pol.h)
    h_bits = sum((int(x) % 2) << i for i, x in enumerate(hc))
    return F2Data(span.basis, 1, span.rank, h_bits, masks)


def functional_annihilates(phi: int, vec_bits: int) -> bool:
    return bin(phi & vec_bits).count("1") % 2 == 0


@dataclass
class DescentNode:
    conics: ConicSet
    sat: ConicSet                 # tracked saturation
    history: tuple = ()

    @property
    def rank(self) -> int:
        return self.conics.rank

    def key(self):
        return (-len(self.conics), self.rank)


def descend_step(node: DescentNode, phi: int, threshold: int = 0):
    """One index-2 cut; returns (status, child-or-None).

    status: "child" for an accepted child node, otherwise the discard
    reason ("improper", "small", "noncyclic", "unsaturated").
    """
    cs = node.conics
    f2 = f2_reduce(cs)
    if not functional_annihilates(phi, f2.h_bits):
        raise ValueError("functional does not annihilate the polarization")
    par = np.zeros(len(cs), dtype=bool)
    masked = f2.conic_bits & np.int64(phi & ((1 << f2.dim) - 1))
    for i, m in enumerate(masked.tolist()):
        par[i] = bin(m).count("1") % 2 == 0
    if par.all():
        return "improper", DescentNode(cs, node.sat, node.history + (phi,))
    child = cs.subset(par)
    if len(child) < max(threshold, 1):
        return "small", None
    hist = node.history + (phi,)
    if child.rank == cs.rank:
        # quotient spnZ(sat)/spnZ(child) must be cyclic
        sat_span = node.sat.span_z
        num, den0 = intmat.scale_to_int([list(b) for b in child.span_z.basis])
        coords, den, ok = sat_span.coords_array(
            np.array(num, dtype=np.int64), den0)
        if not ok.all():
            raise LatticeError("child span escapes the tracked saturation span")
        m = [[int(x) for x in row] for row in coords]
        if den != 1:
            m = [[x // den for x in row] for row in m]
        if not intmat.quotient_is_cyclic(m):
            return "noncyclic", None
        return "child", DescentNode(child, node.sat, hist)
    sat_child = child.saturation()
    if len(sat_child) != len(child):
        return "unsaturated", None
    return "child", DescentNode(child, child, hist)


def h_annihilator_functionals(f2: F2Data, extra_constraints=()):
    """All nonzero functionals killing h (and the given extra bit rows)."""
    rows = [f2.h_bits] + list(extra_constraints)
    # solve phi . c = 0 for all constraints c: full RREF over F2, so each
    # pivot bit occurs in exactly one constraint row
    dim = f2.dim
    pivots = []
    reduced = []
    for r in rows:
        cur = r
        for p, pr in zip(pivots, reduced):
            if cur >> p & 1:
                cur ^= pr
        if cur:
            p = cur.bit_length() - 1
            for i, pr in enumerate(reduced):
                if pr >> p & 1:
                    reduced[i] = pr ^ cur
            pivots.append(p)
            reduced.append(cur)
    pivset = set(pivots)
    free_cols = [c for c in range(dim) if c not in pivset]
    gens = []
    for c in free_cols:
        phi = 1 << c
        for p, pr in zip(pivots, reduced):
            if bin(phi & pr).count("1") % 2:
                phi ^= 1 << p
        gens.append(phi)
    if len(gens) > 16:
        raise FunctionalSpaceTooLarge(
            f"2^{len(gens)} functionals; supply a seed or symmetries")
    out = []
    for mask in range(1, 1 << len(gens)):
        phi = 0
        mm = mask
        i = 0
        while mm:
            if mm & 1:
                phi ^= gens[i]
            mm >>= 1
            i += 1
        out.append(phi)
    return sorted(set(out) - {0})


@dataclass(frozen=True)
class SymmetryAction:
    """Ambient isometries fixing h, given as row-action matrices."""
    matrices: tuple  # tuples of tuples of Fractions

    @staticmethod
    def from_json(text: str) -> "SymmetryAction":
        data = json.loads(text)
        mats = []
        for g in data["generators"]:
            if g["type"] == "diag":
                n = len(g["signs"])
                mats.append(tuple(tuple(Q(g["signs"][i]) if i == j else Q(0)
                                        for j in range(n)) for i in range(n)))
            elif g["type"] == "matrix":
                mats.append(tuple(tuple(Q(x) for x in row) for row in g["rows"]))
            else:
                raise ValueError(f"unknown generator type {g['type']}")
        return SymmetryAction(tuple(mats))

    def check(self, pol: PolarizedLattice):
        for m in self.matrices:
            img = tuple(sum(Q(a) * m[i][j] for i, a in enumerate(pol.h))
                        for j in range(pol.ambient.dim))
            if img != pol.h:
                raise LatticeError("symmetry generator moves h")


@dataclass
class DescentResult:
    sets: list
    complete: bool
    nodes_processed: int


def run_descent(seed: ConicSet, threshold: int, max_rank: int,
                budget: int = 2000, symmetries: SymmetryAction | None = None,
                checkpoint=None) -> DescentResult:
    """Search saturated admissible sets above the threshold via index-2 cuts.

    The chain is constrained to supersets of the seed (all cuts kill the
    seed's span classes), so the result lists the saturated admissible
    supersets of the seed of size >= threshold and rank <= max_rank, up to
    fingerprint equivalence, relative to the budget.
    """
    pol = seed.pol
    orb = enumerate_orb(pol)
    if symmetries is not None:
        symmetries.check(pol)
    start = DescentNode(orb, orb.saturation())
    frontier = [start]
    seen_nodes = set()
    results = {}
    nodes = 0
    complete = True
    seed_f2 = f2_reduce(seed) if len(seed) else None

    while frontier:
        frontier.sort(key=lambda nd: nd.key())
        node = frontier.pop(0)
        nodes += 1
        if nodes > budget:
            complete = False
            break
        cs = node.conics
        f2 = f2_reduce(cs)
        constraints = ()
        if seed_f2 is not None:
            coords, den, ok = cs.span_z.coords_array(seed.arr, seed.den)
            if not ok.all():
                continue  # branch no longer contains the seed
            c2 = (coords // den if den != 1 else coords) % 2
            constraints = tuple(int((row * (1 << np.arange(f2.dim, dtype=np.int64))).sum())
                                for row in c2.astype(np.int64))
        if cs.rank <= max_rank and len(cs) >= threshold and cs.is_saturated() \
                and cs.is_admissible():
            fp = fingerprint(cs)
            results.setdefault((cs.rank, fp), cs)
        try:
            funcs = h_annihilator_functionals(f2, constraints)
        except FunctionalSpaceTooLarge:
            complete = False
            continue
        funcs = _orbit_representatives(funcs, f2, cs, symmetries)
        for phi in funcs:
            status, child = descend_step(node, phi, threshold)
            if status != "child":
                continue
            key = node_key(child.conics)
            if key in seen_nodes:
                continue
            seen_nodes.add(key)
            frontier.append(child)
    out = sorted(results.values(), key=lambda c: (-len(c), c.rank))
    return DescentResult(out, complete, nodes)


def _orbit_representatives(funcs, f2: F2Data, cs: ConicSet,
                           symmetries: SymmetryAction | None):
    if symmetries is None or not funcs:
        return funcs
    # matrices acting on span coordinates mod 2 (only those fixing the set)
    mats = []
    span = cs.span_z
    for m in symmetries.matrices:
        if any(Q(x).denominator != 1 for row in m for x in row):
            continue
        g = np.array([[int(Q(x)) for x in row] for row in m], dtype=np.int64)
        moved = cs.arr @ g
        if {tuple(r) for r in moved.tolist()} != cs._row_set:
            continue
        rows = []
        okall = True
        for b in span.basis:
            img = tuple(sum(Q(a) * Q(int(g[i, j])) for i, a in enumerate(b))
                        for j in range(span.ambient.dim))
            c = span.coords(img)
            if c is None or any(x.denominator != 1 for x in c):
                okall = False
                break
            rows.append([int(x) % 2 for x in c])
        if okall:
            mats.append(rows)
    if not mats:
        return funcs
    remaining = set(funcs)
    reps = []
    while remaining:
        phi = min(remaining)
        reps.append(phi)
        orbit = {phi}
        queue = [phi]
        while queue:
            cur = queue.pop()
            for g in mats:
                img = 0
                for i, row in enumerate(g):
                    # phi composed with g: (phi o g)(e_i) = phi(g(e_i))
                    bit = 0
                    for j, x in enumerate(row):
                        if x and cur >> j & 1:
                            bit ^= 1
                    if bit:
                        img |= 1 << i
                if img not in orbit:
                    orbit.add(img)
                    queue.append(img)
        remaining -= orbit
    return reps


def descend_exact(start: ConicSet, vector) -> ConicSet:
    """Iterate index-2 cuts induced by one lattice vector to its exact wall.

    The linear form T(x) = x·w − (x·h)(w·h)/4 vanishes on h and equals the
    recovery condition on conics; each round cuts by the parity of T/gcd,
    exactly as in the subgroup-chain construction, until T vanishes on the
    whole span.
    """
    cs = start
    lat = cs.pol.lattice
    h = cs.pol.h
    w = tuple(Q(x) for x in vector)
    hw = lat.dot(h, w)
    for _ in range(64):
        span = cs.span_z
        vals = [lat.dot(b, w) - lat.dot(b, h) * hw / 4 for b in span.basis]
        if all(v == 0 for v in vals):
            return cs
        den = 1
        for v in vals:
            den = den * v.denominator // gcd(den, v.denominator)
        ints = [int(v * den) for v in vals]
        g = 0
        for v in ints:
            g = gcd(g, abs(v))
        parities = [(v // g) % 2 for v in ints]
        phi = sum(b << i for i, b in enumerate(parities))
        # raw index-2 cut: the exact chain may pass through sets the search
        # heuristics would discard
        f2 = f2_reduce(cs)
        masked = f2.conic_bits & np.int64(phi)
        keep = np.array([bin(int(x)).count("1") % 2 == 0 for x in masked.tolist()])
        if keep.all():
            raise RuntimeError("parity functional trivial on a generating set")
        cs = cs.subset(keep)
        if len(cs) == 0:
            return cs
    raise RuntimeError("exact descent did not terminate")


def chain_threshold(n: int, q: int, s: int) -> int:
    """Minimal guaranteed overlap ceil(n*q/s) of a homogeneous chain stage."""
    if q > s or n > s:
        raise ValueError("need q <= s and n <= s")
    return -((-n * q) // s)
