"""Families: predicates vs brute-force double loops, restrictions,
transversals, and the named constructions."""

import random
from itertools import combinations

import pytest

from crossint.exactmath import binom, hm_size
from crossint.family import (
    Family,
    all_ksets,
    are_cross_intersecting,
    common_intersection,
    degree_table,
    diversity,
    example1_pair,
    family_from_doc,
    family_of,
    family_to_doc,
    hm_family,
    is_intersecting,
    is_non_trivial,
    max_degree_elements,
    mixed_uniformity_pair,
    pair_stats,
    read_family,
    restrict_in,
    restrict_out,
    star,
    transversal,
    write_family,
)
from crossint.kset import GroundSpec, kset


def random_family(rng, n, k, size):
    g = GroundSpec(1, n, k)
    pool = list(combinations(range(1, n + 1), k))
    return family_of(g, rng.sample(pool, min(size, len(pool))))


def test_family_of_dedups_and_sorts():
    g = GroundSpec(1, 5, 2)
    fam = family_of(g, [(4, 5), (1, 2), (2, 1), (4, 5)])
    assert [m.elements for m in fam.members] == [(1, 2), (4, 5)]
    assert len(fam) == 2
    assert kset(g, [1, 2]) in fam
    assert kset(g, [1, 3]) not in fam


def test_family_constructor_rejects_disorder():
    g = GroundSpec(1, 5, 2)
    a, b = kset(g, [1, 2]), kset(g, [1, 3])
    Family(g, (a, b))
    with pytest.raises(ValueError):
        Family(g, (b, a))
    with pytest.raises(ValueError):
        Family(g, (a, a))
    with pytest.raises(ValueError):
        Family(GroundSpec(1, 6, 2), (a,))


def test_intersecting_predicates_against_double_loop():
    rng = random.Random(9)
    for _ in range(80):
        n = rng.randint(4, 8)
        k = rng.randint(2, n // 2 + 1)
        f = random_family(rng, n, k, rng.randint(0, 12))
        g = random_family(rng, n, k, rng.randint(0, 12))
        want_f = all(a.mask & b.mask for a in f for b in f)
        want_fg = all(a.mask & b.mask for a in f for b in g)
        assert is_intersecting(f) == want_f
        assert are_cross_intersecting(f, g) == want_fg


def test_cross_intersecting_requires_matching_n():
    f = family_of(GroundSpec(1, 5, 2), [(1, 2)])
    g = family_of(GroundSpec(1, 6, 2), [(1, 2)])
    with pytest.raises(ValueError):
        are_cross_intersecting(f, g)


def test_common_intersection_and_nontriviality():
    g = GroundSpec(1, 6, 3)
    fam = family_of(g, [(1, 2, 3), (1, 2, 4), (1, 2, 5)])
    assert common_intersection(fam) == {1, 2}
    assert not is_non_trivial(fam)
    fam2 = family_of(g, [(1, 2, 3), (1, 2, 4), (3, 4, 5)])
    assert common_intersection(fam2) == frozenset()
    assert is_non_trivial(fam2)
    empty = Family(g, ())
    assert common_intersection(empty) == {1, 2, 3, 4, 5, 6}
    assert not is_non_trivial(empty)


def test_restrictions_partition_the_family():
    rng = random.Random(10)
    fam = random_family(rng, 7, 3, 14)
    inside, outside = restrict_in(fam, 3), restrict_out(fam, 3)
    assert len(inside) + len(outside) == len(fam)
    assert all(3 in m.elements for m in inside)
    assert all(3 not in m.elements for m in outside)
    with pytest.raises(ValueError):
        restrict_in(fam, 8)


def test_degree_diversity_maxdeg():
    h = hm_family(7, 3)
    deg = degree_table(h)
    assert deg[1] == len(h) - 1  # every member but the window set contains 1
    assert diversity(h) == 1
    assert max_degree_elements(h) == {1}
    s = star(7, 3, 4)
    assert diversity(s) == 0
    assert 4 in max_degree_elements(s)


def test_all_ksets_and_star():
    uni = all_ksets(6, 3)
    assert len(uni) == 20
    seq = [m.elements for m in uni.members]
    assert seq == sorted(seq)
    s = star(6, 3, 2)
    assert len(s) == binom(5, 2)
    assert all(2 in m.elements for m in s)


def test_transversal_against_double_loop():
    rng = random.Random(12)
    for _ in range(40):
        n = rng.randint(4, 7)
        k = rng.randint(2, 3)
        f = random_family(rng, n, k, rng.randint(0, 10))
        t = transversal(f, k)
        pool = list(combinations(range(1, n + 1), k))
        want = [
            c
            for c in pool
            if all(set(c) & set(m.elements) for m in f)
        ]
        assert [m.elements for m in t.members] == want


def test_transversal_of_empty_is_everything():
    g = GroundSpec(1, 6, 3)
    assert len(transversal(Family(g, ()), 3)) == 20


def test_transversal_refuses_blowups():
    f = family_of(GroundSpec(1, 44, 20), [tuple(range(1, 21))])
    with pytest.raises(ValueError):
        transversal(f, 20)


@pytest.mark.parametrize("nk", [(5, 2), (6, 2), (7, 3), (9, 4)])
def test_hm_family_is_extremal_witness(nk):
    n, k = nk
    fam = hm_family(n, k)
    assert len(fam) == hm_size(n, k)
    assert is_intersecting(fam)
    assert is_non_trivial(fam)
    # the window set [2, k+1] is the unique member avoiding 1
    avoiding = [m for m in fam if 1 not in m.elements]
    assert [m.elements for m in avoiding] == [tuple(range(2, k + 2))]


def test_hm_family_domain():
    with pytest.raises(ValueError):
        hm_family(6, 3)  # needs n > 2k
    with pytest.raises(ValueError):
        hm_family(4, 1)


def test_example1_pair_structure():
    f, g = example1_pair(7, 3, (2, 3, 4), (4, 5, 6))
    h = hm_size(7, 3)
    assert len(f) == len(g) == h
    assert are_cross_intersecting(f, g)
    assert is_non_trivial(f) and is_non_trivial(g)
    # F consists of f0 plus exactly the 1-sets meeting g0
    assert (2, 3, 4) in {m.elements for m in f}
    for m in f:
        if m.elements != (2, 3, 4):
            assert 1 in m.elements and set(m.elements) & {4, 5, 6}


def test_example1_pair_validation():
    with pytest.raises(ValueError):
        example1_pair(6, 3, (2, 3, 4), (4, 5, 6))  # n <= 2k
    with pytest.raises(ValueError):
        example1_pair(7, 3, (1, 2, 3), (3, 4, 5))  # 1 not allowed
    with pytest.raises(ValueError):
        example1_pair(7, 3, (2, 3), (4, 5, 6))  # wrong size
    with pytest.raises(ValueError):
        example1_pair(7, 3, (2, 3, 4), (5, 6, 7))  # disjoint anchors


def test_mixed_uniformity_pair_sizes_by_enumeration():
    n, k, l = 9, 4, 2
    f, g = mixed_uniformity_pair(n, k, l, (2, 3, 4, 5), (5, 6))
    want_f = 1 + sum(
        1
        for c in combinations(range(2, n + 1), k - 1)
        if set(c) & {5, 6}
    )
    want_g = 1 + sum(
        1
        for c in combinations(range(2, n + 1), l - 1)
        if set(c) & {2, 3, 4, 5}
    )
    assert (len(f), len(g)) == (want_f, want_g) == (37, 5)
    assert are_cross_intersecting(f, g)
    assert is_non_trivial(f) and is_non_trivial(g)


def test_mixed_uniformity_validation():
    with pytest.raises(ValueError):
        mixed_uniformity_pair(9, 2, 4, (2, 3), (2, 3, 4, 5))  # k <= l
    with pytest.raises(ValueError):
        mixed_uniformity_pair(8, 4, 2, (2, 3, 4, 5), (5, 6))  # n <= 2k
    with pytest.raises(ValueError):
        mixed_uniformity_pair(9, 4, 2, (2, 3, 4, 5), (6, 7))  # disjoint


def test_pair_stats_fields():
    f, g = example1_pair(7, 3, (2, 3, 4), (4, 5, 6))
    st = pair_stats(f, g)
    assert (st.size_f, st.size_g, st.product) == (13, 13, 169)
    assert st.ci and st.nontrivial_f and st.nontrivial_g


def test_family_doc_roundtrip(tmp_path):
    fam = hm_family(7, 3)
    doc = family_to_doc(fam)
    assert doc["schema"] == "family/1"
    assert family_from_doc(doc) == fam
    path = tmp_path / "fam.json"
    write_family(path, fam)
    assert read_family(path) == fam


def test_family_doc_rejects_noncanonical_order():
    doc = family_to_doc(hm_family(7, 3))
    doc["sets"] = list(reversed(doc["sets"]))
    with pytest.raises(ValueError):
        family_from_doc(doc)
