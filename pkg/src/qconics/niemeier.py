"""Rank-24 even unimodular lattices from root blocks and glue codes.

Blocks live in orthonormal coordinates: A_n is the zero-sum sublattice of
Z^(n+1), D_n the even-sum sublattice of Z^n.  The 24A1 case uses a diagonal
form of 2's so that basis vectors are roots.  Glue vectors are sums of
shortest discriminant-class representatives, one per block; a built lattice
is validated to be even of determinant 1.

The Leech lattice is generated in Z^24 with the form (x·y)/8 by the square-4
shapes 4(e_i+e_j), 2*(octad), and (1,...,1) - 4e_i.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from . import golay, intmat
from .intmat import Q
from .lattice import AmbientSpace, Lattice, LatticeError, PolarizedLattice, vec


@dataclass(frozen=True)
class RootBlock:
    kind: str  # "A" | "D"
    n: int
    offset: int

    @property
    def width(self) -> int:
        return self.n + 1 if self.kind == "A" else self.n

    def simple_roots(self, dim: int) -> list:
        out = []
        if self.kind == "A":
            for i in range(self.n):
                v = [0] * dim
                v[self.offset + i] = 1
                v[self.offset + i + 1] = -1
                out.append(v)
        else:
            for i in range(self.n - 1):
                v = [0] * dim
                v[self.offset + i] = 1
                v[self.offset + i + 1] = -1
                out.append(v)
            v = [0] * dim
            v[self.offset + self.n - 2] = 1
            v[self.offset + self.n - 1] = 1
            out.append(v)
        return out

    def root_count(self) -> int:
        return self.n * (self.n + 1) if self.kind == "A" else 2 * self.n * (self.n - 1)

    def glue_rep(self, cls: int, subset=None) -> list:
        """Shortest representative of a discriminant class, as Fractions.

        A_n classes are 0..n (class m realized on a subset of size m);
        D_n classes are 0..3 in the usual labelling (2 -> e_i, 1/3 -> the
        two half-vectors).
        """
        w = self.width
        v = [Q(0)] * w
        if self.kind == "A":
            if not 0 <= cls <= self.n:
                raise LatticeError(f"invalid A_{self.n} class {cls}")
            m = cls
            if m == 0:
                return v
            o = subset if subset is not None else range(m)
            o = sorted(o)
            if len(o) != m or any(not 0 <= i < w for i in o):
                raise LatticeError("bad class subset")
            for i in range(w):
                v[i] = Q(-m, w)
            for i in o:
                v[i] = Q(w - m, w)
            return v
        if cls == 0:
            return v
        if cls == 2:
            v[0] = Q(1)
            return v
        if cls == 1:
            return [Q(1, 2)] * w
        if cls == 3:
            out = [Q(1, 2)] * w
            out[-1] = Q(-1, 2)
            return out
        raise LatticeError(f"invalid D_{self.n} class {cls}")


@dataclass(frozen=True)
class NiemeierSpec:
    name: str
    blocks: tuple          # RootBlock tuple
    glue: tuple            # tuple of per-block class tuples; () = code-driven
    diagonal_entry: int = 1

    @property
    def dim(self) -> int:
        return sum(b.width for b in self.blocks)


def _blocks(kind: str, n: int, count: int) -> tuple:
    out = []
    off = 0
    for _ in range(count):
        b = RootBlock(kind, n, off)
        out.append(b)
        off += b.width
    return tuple(out)


def _parity(perm) -> int:
    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm))
              if perm[i] > perm[j])
    return inv % 2


SHIPPED = {
    "A24": NiemeierSpec("A24", _blocks("A", 24, 1), ((5,),)),
    "2D12": NiemeierSpec("2D12", _blocks("D", 12, 2), ((1, 2), (2, 1), (3, 3))),
    "4D6": NiemeierSpec("4D6", _blocks("D", 6, 4), tuple(
        p for p in itertools.permutations((0, 1, 2, 3)) if _parity(p) == 0)),
    "8A3": NiemeierSpec("8A3", _blocks("A", 3, 8), tuple(
        (3,) + tuple((2, 0, 0, 1, 0, 1, 1)[(k - s) % 7] for k in range(7))
        for s in range(7))),
    "24A1": NiemeierSpec("24A1", (), (), diagonal_entry=2),
}


def glue_vector(spec: NiemeierSpec, classes) -> list:
    v = []
    for block, cls in zip(spec.blocks, classes):
        v.extend(block.glue_rep(cls))
    return v


@lru_cache(maxsize=None)
def build_niemeier(name: str) -> Lattice:
    """Build a shipped Niemeier lattice by name (validated)."""
    if name == "leech":
        return build_leech()
    if name not in SHIPPED:
        raise LatticeError(f"unknown lattice '{name}'")
    return build_from_spec(SHIPPED[name])


def build_from_spec(spec: NiemeierSpec) -> Lattice:
    if spec.name == "24A1":
        return _build_24a1()
    dim = spec.dim
    amb = AmbientSpace.diagonal(dim, spec.diagonal_entry)
    gens = []
    for b in spec.blocks:
        gens.extend(b.simple_roots(dim))
    for classes in spec.glue:
        if len(classes) != len(spec.blocks):
            raise LatticeError("glue tuple length mismatch")
        gens.append(glue_vector(spec, classes))
    lat = _span(amb, gens)
    _validate_unimodular(lat, spec.name)
    return lat


def _build_24a1() -> Lattice:
    code = golay.frame_a1()
    amb = AmbientSpace.diagonal(24, 2)
    gens = [[Q(1) if i == j else Q(0) for j in range(24)] for i in range(24)]
    for g in code.generators:
        gens.append([Q(1, 2) if g >> j & 1 else Q(0) for j in range(24)])
    lat = _span(amb, gens)
    _validate_unimodular(lat, "24A1")
    return lat


@lru_cache(maxsize=None)
def build_leech() -> Lattice:
    code = golay.frame_leech()
    amb = AmbientSpace.diagonal(24, Q(1, 8))
    gens = []
    for i in range(24):
        for j in range(i + 1, 24):
            v = [Q(0)] * 24
            v[i] = v[j] = Q(4)
            gens.append(v)
    for o in code.octads():
        gens.append([Q(2) if o >> j & 1 else Q(0) for j in range(24)])
    for i in range(24):
        v = [Q(1)] * 24
        v[i] = Q(-3)
        gens.append(v)
    lat = _span(amb, gens)
    _validate_unimodular(lat, "leech")
    return lat


def _span(amb: AmbientSpace, gens) -> Lattice:
    num, den = intmat.scale_to_int(gens)
    h = intmat.hnf(num)
    basis = [tuple(Q(x, den) for x in row) for row in h]
    return Lattice(amb, basis)


def _validate_unimodular(lat: Lattice, name: str):
    if lat.rank != 24:
        raise LatticeError(f"{name}: expected rank 24, got {lat.rank}")
    if not lat.is_even:
        raise LatticeError(f"{name}: glue produced an odd lattice")
    if abs(lat.det) != 1:
        raise LatticeError(f"{name}: determinant {lat.det} != ±1 (wrong glue index)")


def root_count_closed_form(name: str) -> int:
    if name == "leech":
        return 0
    if name == "24A1":
        return 48
    spec = SHIPPED[name]
    return sum(b.root_count() for b in spec.blocks)


def _v(dim, pairs) -> tuple:
    out = [Q(0)] * dim
    for i, val in pairs:
        out[i] = Q(val)
    return tuple(out)


@lru_cache(maxsize=None)
def polarizations(name: str) -> tuple:
    """Shipped square-4 orbit representatives, as (label, vector) pairs."""
    lat = build_niemeier(name)
    dim = lat.ambient.dim
    if name == "A24":
        reps = [("orbit4", _v(dim, [(0, 1), (1, 1), (2, -1), (3, -1)])),
                ("cl20", tuple(Q(1, 5) if i < 20 else Q(-4, 5) for i in range(25)))]
    elif name == "2D12":
        reps = [("2e", _v(dim, [(0, 2)])),
                ("2+2", _v(dim, [(0, 1), (1, 1), (12, 1), (13, 1)])),
                ("orbit4", _v(dim, [(0, 1), (1, 1), (2, 1), (3, 1)])),
                ("cl2+cl1", tuple([Q(1)] + [Q(0)] * 11 + [Q(1, 2)] * 12))]
    elif name == "4D6":
        reps = [("4^2", _v(dim, [(0, 2)])),
                ("orbit4", _v(dim, [(0, 1), (1, 1), (2, 1), (3, 1)])),
                ("2+2", _v(dim, [(0, 1), (1, 1), (6, 1), (7, 1)])),
                ("glue-0123", tuple([Q(0)] * 6 + [Q(1, 2)] * 6 + [Q(1)] + [Q(0)] * 5
                                    + [Q(1, 2)] * 5 + [Q(-1, 2)])),
                ("cl2x4", _v(dim, [(0, 1), (6, 1), (12, 1), (18, 1)]))]
    elif name == "8A3":
        reps = [("orbit4", _v(dim, [(0, 1), (1, -1), (2, 1), (3, -1)]))]
    elif name == "24A1":
        reps = [("pair", _v(dim, [(0, 1), (1, 1)])),
                ("half-octad", tuple(Q(1, 2) if i < 8 else Q(0) for i in range(24)))]
    elif name == "leech":
        reps = [("two-pair", _v(dim, [(0, 4), (1, 4)])),
                ("octad", tuple(Q(2) if i < 8 else Q(0) for i in range(24)))]
    else:
        raise LatticeError(f"unknown lattice '{name}'")
    out = []
    for label, h in reps:
        p = PolarizedLattice(lat, h)  # validates membership and square 4
        out.append((label, p))
    return tuple(out)


def polarization(name: str, label: str) -> PolarizedLattice:
    for lab, p in polarizations(name):
        if lab == label:
            return p
    raise LatticeError(f"lattice {name} has no polarization '{label}'")
