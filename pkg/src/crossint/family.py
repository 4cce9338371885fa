"""Uniform families of k-sets: predicates, restrictions, diversity, the
transversal operator, and the named extremal constructions."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from pathlib import Path
from typing import Iterable, Union

from ._doc import read_doc, write_doc
from ._kernels import meets_all, pairs_all_intersect
from .exactmath import binom, hm_size
from .kset import GroundSpec, KSet, elements_of, kset, mask_of

# transversal materializes every candidate k-set of [1, n]; refuse blowups
_TRANSVERSAL_CAP = 2_000_000

SetLike = Union[KSet, Iterable[int]]


@dataclass(frozen=True)
class Family:
    """Canonically sorted, duplicate-free k-uniform family.

    Use `family_of` to build one from raw element lists; the constructor
    expects members already in lexicographic order.
    """

    ground: GroundSpec
    members: tuple[KSet, ...]

    def __post_init__(self) -> None:
        prev: tuple[int, ...] | None = None
        for m in self.members:
            if m.ground != self.ground:
                raise ValueError(f"member {m} has ground {m.ground}, family has {self.ground}")
            cur = m.elements
            if prev is not None and cur <= prev:
                raise ValueError(f"members not strictly lex-sorted near {m}")
            prev = cur

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, item: KSet) -> bool:
        return item.mask in self.mask_set

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(m.mask for m in self.members)

    @cached_property
    def mask_set(self) -> frozenset[int]:
        return frozenset(self.masks)

    def __repr__(self) -> str:
        g = self.ground
        return f"Family([{g.lo},{g.n}] k={g.k}, {len(self.members)} sets)"


def family_of(ground: GroundSpec, sets: Iterable[Iterable[int]]) -> Family:
    """Canonicalize arbitrary input order into a Family (dedup + lex sort)."""
    seen: dict[int, KSet] = {}
    for s in sets:
        ks = s if isinstance(s, KSet) else kset(ground, s)
        if ks.ground != ground:
            raise ValueError(f"member {ks} ground mismatch")
        seen[ks.mask] = ks
    ordered = sorted(seen.values(), key=lambda ks: ks.elements)
    return Family(ground, tuple(ordered))


@dataclass(frozen=True)
class PairStats:
    size_f: int
    size_g: int
    product: int
    ci: bool
    nontrivial_f: bool
    nontrivial_g: bool


def is_intersecting(f: Family) -> bool:
    """Every two members share an element (vacuously true when |f| <= 1)."""
    return pairs_all_intersect(f.masks, f.masks)


def are_cross_intersecting(f: Family, g: Family) -> bool:
    if f.ground.n != g.ground.n:
        raise ValueError(f"ground length mismatch: n={f.ground.n} vs n={g.ground.n}")
    return pairs_all_intersect(f.masks, g.masks)


def common_intersection(f: Family) -> frozenset[int]:
    """Intersection of all members; the whole ground interval when empty."""
    acc = f.ground.interval_mask()
    for m in f.masks:
        acc &= m
        if not acc:
            break
    return frozenset(elements_of(acc))


def is_non_trivial(f: Family) -> bool:
    return not common_intersection(f)


def restrict_in(f: Family, i: int) -> Family:
    """Members containing i."""
    _check_element(f.ground, i)
    bit = 1 << (i - 1)
    return Family(f.ground, tuple(m for m in f.members if m.mask & bit))


def restrict_out(f: Family, i: int) -> Family:
    """Members avoiding i."""
    _check_element(f.ground, i)
    bit = 1 << (i - 1)
    return Family(f.ground, tuple(m for m in f.members if not m.mask & bit))


def _check_element(g: GroundSpec, i: int) -> None:
    if not g.lo <= i <= g.n:
        raise ValueError(f"element {i} outside ground [{g.lo}, {g.n}]")


def degree_table(f: Family) -> dict[int, int]:
    g = f.ground
    deg = {i: 0 for i in range(g.lo, g.n + 1)}
    for m in f.members:
        for e in m.elements:
            deg[e] += 1
    return deg


def diversity(f: Family) -> int:
    """min over ground elements i of the number of members avoiding i."""
    size = len(f)
    deg = degree_table(f)
    return min(size - d for d in deg.values())


def max_degree_elements(f: Family) -> frozenset[int]:
    deg = degree_table(f)
    top = max(deg.values())
    return frozenset(i for i, d in deg.items() if d == top)


@lru_cache(maxsize=128)
def all_ksets(n: int, k: int) -> Family:
    """Complete k-uniform family on [1, n], lex order (cached; immutable)."""
    g = GroundSpec(1, n, k)
    return Family(g, tuple(KSet(mask_of(c), g) for c in combinations(range(1, n + 1), k)))


def transversal(f: Family, target_k: int) -> Family:
    """All target_k-subsets of [1, n] meeting every member of f; the maximal
    family cross-intersecting with f."""
    n = f.ground.n
    if binom(n, target_k) > _TRANSVERSAL_CAP:
        raise ValueError(f"transversal would materialize C({n},{target_k}) sets")
    universe = all_ksets(n, target_k)
    if not f.members:
        return universe
    keep = meets_all(universe.masks, f.masks)
    return Family(universe.ground, tuple(m for m, ok in zip(universe.members, keep) if ok))


@lru_cache(maxsize=256)
def star(n: int, k: int, x: int) -> Family:
    """All k-subsets of [1, n] containing x."""
    g = GroundSpec(1, n, k)
    _check_element(g, x)
    rest = [i for i in range(1, n + 1) if i != x]
    return family_of(g, ((x, *c) for c in combinations(rest, k - 1)))


@lru_cache(maxsize=64)
def hm_family(n: int, k: int) -> Family:
    """Sets containing 1 that meet [2, k+1], plus [2, k+1] itself: the
    largest non-trivial intersecting family."""
    if k < 2 or n <= 2 * k:
        raise ValueError("hm_family needs n > 2k >= 4")
    g = GroundSpec(1, n, k)
    window = mask_of(range(2, k + 2))
    members = [kset(g, range(2, k + 2))]
    for c in combinations(range(2, n + 1), k - 1):
        m = mask_of(c)
        if m & window:
            members.append(KSet(m | 1, g))
    return family_of(g, members)


def _as_mask(s: SetLike) -> int:
    return s.mask if isinstance(s, KSet) else mask_of(s)


def example1_pair(n: int, k: int, f0: SetLike, g0: SetLike) -> tuple[Family, Family]:
    """The equality pair: F = {f0} + {sets containing 1 that meet g0}, and
    symmetrically for G.  Both sizes equal hm_size(n, k)."""
    if n <= 2 * k:
        raise ValueError("example1_pair needs n > 2k")
    fm, gm = _as_mask(f0), _as_mask(g0)
    g = GroundSpec(1, n, k)
    for name, m in (("f0", fm), ("g0", gm)):
        if m.bit_count() != k:
            raise ValueError(f"{name} must have exactly k={k} elements")
        if m & 1 or m & ~g.interval_mask():
            raise ValueError(f"{name} must be a subset of [2, {n}]")
    if not fm & gm:
        raise ValueError("f0 and g0 must intersect")

    def side(anchor: int, other: int) -> Family:
        members = [KSet(anchor, g)]
        for c in combinations(range(2, n + 1), k - 1):
            m = mask_of(c)
            if m & other:
                members.append(KSet(m | 1, g))
        return family_of(g, members)

    return side(fm, gm), side(gm, fm)


def mixed_uniformity_pair(
    n: int, k: int, l: int, f0: SetLike, g0: SetLike
) -> tuple[Family, Family]:
    """Two-uniformity variant: k-sets against l-sets, anchored at f0, g0."""
    if not n > 2 * k > 2 * l >= 4:
        raise ValueError("mixed_uniformity_pair needs n > 2k > 2l >= 4")
    fm, gm = _as_mask(f0), _as_mask(g0)
    gk = GroundSpec(1, n, k)
    gl = GroundSpec(1, n, l)
    if fm.bit_count() != k:
        raise ValueError(f"f0 must have exactly k={k} elements")
    if gm.bit_count() != l:
        raise ValueError(f"g0 must have exactly l={l} elements")
    if (fm | gm) & 1 or (fm | gm) & ~gk.interval_mask():
        raise ValueError("f0 and g0 must be subsets of [2, n]")
    if not fm & gm:
        raise ValueError("f0 and g0 must intersect")

    def side(ground: GroundSpec, anchor: int, other: int, size: int) -> Family:
        members = [KSet(anchor, ground)]
        for c in combinations(range(2, n + 1), size - 1):
            m = mask_of(c)
            if m & other:
                members.append(KSet(m | 1, ground))
        return family_of(ground, members)

    return side(gk, fm, gm, k), side(gl, gm, fm, l)


def pair_stats(f: Family, g: Family) -> PairStats:
    return PairStats(
        size_f=len(f),
        size_g=len(g),
        product=len(f) * len(g),
        ci=are_cross_intersecting(f, g),
        nontrivial_f=is_non_trivial(f),
        nontrivial_g=is_non_trivial(g),
    )


def family_to_doc(f: Family) -> dict:
    return {
        "schema": "family/1",
        "lo": f.ground.lo,
        "n": f.ground.n,
        "k": f.ground.k,
        "sets": [list(m.elements) for m in f.members],
    }


def family_from_doc(doc: dict) -> Family:
    if doc.get("schema") != "family/1":
        raise ValueError(f"not a family/1 document: {doc.get('schema')!r}")
    g = GroundSpec(doc["lo"], doc["n"], doc["k"])
    fam = family_of(g, doc["sets"])
    if [list(m.elements) for m in fam.members] != doc["sets"]:
        raise ValueError("family document sets are not in canonical lex order")
    return fam


def write_family(path: str | Path, f: Family) -> Path:
    return write_doc(path, family_to_doc(f))


def read_family(path: str | Path) -> Family:
    return family_from_doc(read_doc(path, expect_schema="family/1"))
