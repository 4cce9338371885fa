"""Bitmask k-sets, the two orders, and rank/unrank."""

import random
from itertools import combinations

import pytest

from crossint.kset import (
    GroundSpec,
    KSet,
    elements_of,
    kset,
    lex_cmp,
    lex_family,
    lex_iter,
    lex_rank,
    lex_unrank,
    mask_of,
    shift_le,
)


def test_ground_spec_validation():
    GroundSpec(1, 64, 3)
    GroundSpec(2, 9, 4)
    with pytest.raises(ValueError):
        GroundSpec(0, 5, 2)
    with pytest.raises(ValueError):
        GroundSpec(1, 65, 2)
    with pytest.raises(ValueError):
        GroundSpec(3, 2, 1)
    with pytest.raises(ValueError):
        GroundSpec(2, 5, 5)  # only 4 slots in [2, 5]


def test_ground_spec_derived():
    g = GroundSpec(2, 9, 4)
    assert g.size == 8
    assert g.total() == 70
    assert g.interval_mask() == 0b111111110


def test_mask_roundtrip():
    rng = random.Random(3)
    for _ in range(200):
        elems = tuple(sorted(rng.sample(range(1, 65), rng.randint(1, 10))))
        assert elements_of(mask_of(elems)) == elems
    with pytest.raises(ValueError):
        mask_of([1, 1])
    with pytest.raises(ValueError):
        mask_of([0])
    with pytest.raises(ValueError):
        mask_of([65])


def test_kset_validation():
    g = GroundSpec(2, 7, 3)
    kset(g, [2, 5, 7])
    with pytest.raises(ValueError):
        kset(g, [2, 5])  # wrong uniformity
    with pytest.raises(ValueError):
        kset(g, [1, 5, 7])  # 1 outside [2, 7]
    with pytest.raises(ValueError):
        KSet(0b11, g)


def test_lex_cmp_matches_tuple_order():
    g = GroundSpec(1, 6, 3)
    all_sets = list(lex_iter(g))
    for a in all_sets:
        for b in all_sets:
            want = (a.elements > b.elements) - (a.elements < b.elements)
            assert lex_cmp(a, b) == want


def test_lex_iter_is_sorted_and_complete():
    g = GroundSpec(2, 8, 3)
    seq = [s.elements for s in lex_iter(g)]
    assert seq == sorted(seq)
    assert len(seq) == g.total()
    assert seq[0] == (2, 3, 4)
    assert seq[-1] == (6, 7, 8)


@pytest.mark.parametrize("g", [GroundSpec(1, 7, 3), GroundSpec(2, 9, 4), GroundSpec(1, 8, 1)])
def test_rank_unrank_bijection(g):
    for r, s in enumerate(lex_iter(g)):
        assert lex_rank(s) == r
        assert lex_unrank(g, r) == s
    with pytest.raises(ValueError):
        lex_unrank(g, g.total())
    with pytest.raises(ValueError):
        lex_unrank(g, -1)


def test_lex_family_prefix():
    g = GroundSpec(1, 7, 3)
    fam = lex_family(g, 10)
    assert len(fam) == 10
    full = list(lex_iter(g))
    assert list(fam.members) == full[:10]
    assert len(lex_family(g, 0)) == 0
    with pytest.raises(ValueError):
        lex_family(g, g.total() + 1)


def test_lex_initial_segments_are_star_shaped():
    # the first C(n-1, k-1) sets are exactly the supersets of {1}; the
    # first C(n-2, k-2) are exactly the supersets of {1, 2}
    from crossint.exactmath import binom

    for n, k in [(6, 3), (7, 3), (9, 4)]:
        g = GroundSpec(1, n, k)
        star1 = lex_family(g, binom(n - 1, k - 1))
        assert all(1 in s.elements for s in star1)
        assert {s.elements for s in star1} == {
            (1, *c) for c in combinations(range(2, n + 1), k - 1)
        }
        star12 = lex_family(g, binom(n - 2, k - 2))
        assert {s.elements for s in star12} == {
            (1, 2, *c) for c in combinations(range(3, n + 1), k - 2)
        }


def test_shift_le_basics():
    g = GroundSpec(1, 7, 3)
    a = kset(g, [1, 2, 3])
    b = kset(g, [2, 4, 7])
    c = kset(g, [1, 5, 6])
    assert shift_le(a, b) and shift_le(a, c)
    assert shift_le(b, b)
    assert not shift_le(b, c) and not shift_le(c, b)  # incomparable
    assert not shift_le(b, a)


def test_shift_le_agrees_with_domination_oracle():
    g = GroundSpec(1, 6, 3)
    sets = list(lex_iter(g))
    for a in sets:
        for b in sets:
            dominated = all(x <= y for x, y in zip(a.elements, b.elements))
            assert shift_le(a, b) == dominated
