"""The extended binary Golay code and the coordinate frames used downstream.

Words are 24-bit masks.  The base code is the extended quadratic-residue
code of length 23; display frames are fixed coordinate permutations of it
chosen so that the configuration pictographs decode inside the lattices
built from each frame:

* frame ``a1``    -- {1..8} and {7..14} are octads (1-based positions);
* frame ``leech`` -- {1..8} and {5..12} are octads, and the sign-flip
  codewords needed by the shipped generator displays exist.

The searches below are deterministic, so the frames are stable; they are
also frozen in ``fixtures/golay_frames.json`` and compared in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


def popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class BinaryCode:
    length: int
    generators: tuple  # independent words as int masks

    @property
    def dimension(self) -> int:
        return len(self.generators)

    @lru_cache(maxsize=None)
    def words(self) -> tuple:
        out = [0]
        for g in self.generators:
            out += [w ^ g for w in out]
        return tuple(sorted(out))

    @lru_cache(maxsize=None)
    def word_set(self) -> frozenset:
        return frozenset(self.words())

    def is_codeword(self, support: int) -> bool:
        return support in self.word_set()

    def weight_distribution(self) -> dict:
        dist: dict[int, int] = {}
        for w in self.words():
            k = popcount(w)
            dist[k] = dist.get(k, 0) + 1
        return dict(sorted(dist.items()))

    @lru_cache(maxsize=None)
    def octads(self) -> tuple:
        return tuple(w for w in self.words() if popcount(w) == 8)

    def octads_through(self, points) -> list:
        """All weight-8 words containing the given points."""
        mask = 0
        for p in points:
            mask |= 1 << p
        return [o for o in self.octads() if o & mask == mask]

    def permuted(self, perm) -> "BinaryCode":
        """Code with position i relabelled perm[i]."""
        gens = []
        for g in self.generators:
            w = 0
            for i in range(self.length):
                if g >> i & 1:
                    w |= 1 << perm[i]
            gens.append(w)
        return BinaryCode(self.length, tuple(gens))

    def is_self_dual(self) -> bool:
        return all(popcount(a & b) % 2 == 0
                   for a in self.generators for b in self.generators)

    def min_weight(self) -> int:
        return min(popcount(w) for w in self.words() if w)


def _base_qr_code() -> BinaryCode:
    """Extended quadratic-residue [24,12] code on positions 0..22 plus 23."""
    g = 0
    for k in (0, 2, 4, 5, 6, 10, 11):  # x^11+x^10+x^6+x^5+x^4+x^2+1
        g |= 1 << k
    gens = []
    for i in range(12):
        w = 0
        for k in range(12):
            if g >> k & 1:
                w |= 1 << ((k + i) % 23)
        # overall parity on position 23
        if popcount(w) % 2:
            w |= 1 << 23
        gens.append(w)
    return BinaryCode(24, tuple(gens))


def _mask(bits) -> int:
    m = 0
    for b in bits:
        m |= 1 << b
    return m


def _align(code: BinaryCode, o1: int, o2: int, layout) -> list:
    """Permutation sending o1/o2 onto the target bit layout.

    layout = (o1_only, shared, o2_only, rest) target positions; source
    positions are taken in increasing order inside each group.
    """
    shared = o1 & o2
    only1 = o1 & ~o2
    only2 = o2 & ~o1
    rest = ((1 << code.length) - 1) & ~(o1 | o2)
    perm = [0] * code.length
    for group, targets in zip((only1, shared, only2, rest), layout):
        src = [i for i in range(code.length) if group >> i & 1]
        assert len(src) == len(targets)
        for s, t in zip(src, targets):
            perm[s] = t
    return perm


def _has_word_with(code_words, region: int, inside: int) -> bool:
    return any(w & region == inside for w in code_words)


@lru_cache(maxsize=None)
def base_code() -> BinaryCode:
    return _base_qr_code()


@lru_cache(maxsize=None)
def frame_a1() -> BinaryCode:
    """Frame with {1..8} and {7..14} (1-based) octads."""
    code = base_code()
    for o1 in code.octads():
        for o2 in code.octads():
            if popcount(o1 & o2) == 2:
                layout = (list(range(0, 6)), [6, 7], list(range(8, 14)),
                          list(range(14, 24)))
                perm = _align(code, o1, o2, layout)
                return code.permuted(perm)
    raise RuntimeError("no octad pair with intersection 2")


#: sign-flip words that must exist in the leech frame: (region, inside) bit masks
_LEECH_FLIP_CONDITIONS = (
    (_mask(range(4, 12)), _mask((6, 8))),   # octad {5..12}, signs at {7,9}
    (_mask(range(4, 12)), _mask((6, 7))),   # octad {5..12}, signs at {7,8}
    (_mask(range(4, 12)), _mask((7, 8))),   # octad {5..12}, signs at {8,9}
    (_mask(range(0, 8)), _mask((1, 2, 3, 6))),  # octad {1..8}, signs at {2,3,4,7}
    (_mask((0, 4)), _mask((0,))),           # pair {1,5}, sign at {1}
    (_mask((4, 7)), _mask((7,))),           # pair {5,8}, sign at {8}
)


@lru_cache(maxsize=None)
def frame_leech() -> BinaryCode:
    """Frame with {1..8} and {5..12} (1-based) octads plus display flips."""
    code = base_code()
    import itertools
    for o1 in code.octads():
        for o2 in code.octads():
            if popcount(o1 & o2) != 4:
                continue
            base_layout = (list(range(0, 4)), list(range(4, 8)),
                           list(range(8, 12)), list(range(12, 24)))
            # permute target slots inside the three 4-blocks until the
            # required flip words exist; deterministic first match wins
            for p1 in itertools.permutations(base_layout[0]):
                for ps in itertools.permutations(base_layout[1]):
                    for p2 in itertools.permutations(base_layout[2]):
                        layout = (list(p1), list(ps), list(p2), base_layout[3])
                        perm = _align(code, o1, o2, layout)
                        cand = code.permuted(perm)
                        words = cand.words()
                        if all(_has_word_with(words, reg, ins)
                               for reg, ins in _LEECH_FLIP_CONDITIONS):
                            return cand
    raise RuntimeError("no leech-compatible frame found")


def build_extended_golay() -> BinaryCode:
    """The frozen [24,12,8] instance used by every fixture (a1 frame)."""
    return frame_a1()


def generator_hex(code: BinaryCode) -> list:
    return [f"{g:06x}" for g in code.generators]
