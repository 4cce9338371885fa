"""k-subsets of a ground interval as 64-bit masks, with the two orders used
throughout: the lexicographic total order and the coordinatewise shifting
partial order, plus rank/unrank and lexicographic initial families."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, islice
from typing import Iterable, TYPE_CHECKING

from .exactmath import binom

if TYPE_CHECKING:
    from .family import Family


@dataclass(frozen=True)
class GroundSpec:
    """k-subsets of the interval [lo, n].  lo > 1 serves families that live
    on [2, n]."""

    lo: int
    n: int
    k: int

    def __post_init__(self) -> None:
        if not 1 <= self.lo <= self.n <= 64:
            raise ValueError(f"ground interval [{self.lo}, {self.n}] out of range (n <= 64)")
        if not 1 <= self.k <= self.n - self.lo + 1:
            raise ValueError(f"uniformity k={self.k} does not fit in [{self.lo}, {self.n}]")

    @property
    def size(self) -> int:
        return self.n - self.lo + 1

    def total(self) -> int:
        """Number of k-subsets of the interval."""
        return binom(self.size, self.k)

    def interval_mask(self) -> int:
        return ((1 << self.size) - 1) << (self.lo - 1)


def mask_of(elements: Iterable[int]) -> int:
    mask = 0
    for e in elements:
        if e < 1 or e > 64:
            raise ValueError(f"element {e} outside [1, 64]")
        bit = 1 << (e - 1)
        if mask & bit:
            raise ValueError(f"duplicate element {e}")
        mask |= bit
    return mask


def elements_of(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length())
        mask ^= low
    return tuple(out)


@dataclass(frozen=True)
class KSet:
    mask: int
    ground: GroundSpec

    def __post_init__(self) -> None:
        g = self.ground
        if self.mask.bit_count() != g.k:
            raise ValueError(f"mask has {self.mask.bit_count()} elements, ground wants k={g.k}")
        if self.mask & ~g.interval_mask():
            raise ValueError(f"elements {elements_of(self.mask)} stray outside [{g.lo}, {g.n}]")

    @property
    def elements(self) -> tuple[int, ...]:
        return elements_of(self.mask)

    def __repr__(self) -> str:
        return "{" + ",".join(map(str, self.elements)) + "}"


def kset(ground: GroundSpec, elements: Iterable[int]) -> KSet:
    return KSet(mask_of(elements), ground)


def _same_ground(a: KSet, b: KSet) -> None:
    if a.ground != b.ground:
        raise ValueError(f"ground mismatch: {a.ground} vs {b.ground}")


def lex_cmp(a: KSet, b: KSet) -> int:
    """-1/0/+1 under the order 'smaller minimum of the symmetric difference
    wins'.  The lowest differing bit decides."""
    _same_ground(a, b)
    if a.mask == b.mask:
        return 0
    low = (a.mask ^ b.mask) & -(a.mask ^ b.mask)
    return -1 if a.mask & low else 1


def shift_le(a: KSet, b: KSet) -> bool:
    """Coordinatewise order on the sorted element tuples: a precedes b iff
    a_i <= b_i for every i."""
    _same_ground(a, b)
    return all(x <= y for x, y in zip(a.elements, b.elements))


def lex_rank(a: KSet) -> int:
    """Position of `a` in the lexicographic enumeration of its ground."""
    g = a.ground
    size = g.size
    rank = 0
    prev = -1
    rem = g.k
    for e in a.elements:
        pos = e - g.lo
        for skipped in range(prev + 1, pos):
            rank += binom(size - 1 - skipped, rem - 1)
        prev = pos
        rem -= 1
    return rank


def lex_unrank(g: GroundSpec, r: int) -> KSet:
    """Inverse of lex_rank, computed by prefix counting rather than
    enumeration."""
    total = g.total()
    if not 0 <= r < total:
        raise ValueError(f"rank {r} outside [0, {total})")
    mask = 0
    rem = g.k
    pos = 0
    while rem > 0:
        here = binom(g.size - 1 - pos, rem - 1)
        if r < here:
            mask |= 1 << (pos + g.lo - 1)
            rem -= 1
        else:
            r -= here
        pos += 1
    return KSet(mask, g)


def lex_iter(g: GroundSpec) -> Iterable[KSet]:
    """All k-subsets of the ground in lexicographic order."""
    for combo in combinations(range(g.lo, g.n + 1), g.k):
        yield KSet(mask_of(combo), g)


def lex_family(g: GroundSpec, m: int) -> "Family":
    """The first m k-subsets of the ground in lexicographic order."""
    from .family import Family

    if not 0 <= m <= g.total():
        raise ValueError(f"m={m} outside [0, {g.total()}]")
    return Family(g, tuple(islice(lex_iter(g), m)))
