"""Exact arithmetic layer, checked against independently built oracles."""

import math
import random
from fractions import Fraction

import pytest

from crossint.exactmath import (
    binom,
    exceeds_two_b,
    f_lemma,
    hm_size,
    pow_ratio_lt,
    ratio_decimal,
)


def pascal_oracle(rows: int) -> list[list[int]]:
    """Triangle rebuilt by repeated addition only; no factorials, no library."""
    tri = [[1]]
    for _ in range(rows):
        prev = tri[-1]
        tri.append([1] + [prev[i] + prev[i + 1] for i in range(len(prev) - 1)] + [1])
    return tri


def test_binom_matches_pascal_oracle():
    tri = pascal_oracle(60)
    for n in range(61):
        for k in range(n + 1):
            assert binom(n, k) == tri[n][k]


def test_binom_matches_math_comb_beyond_memo_cap():
    rng = random.Random(42)
    for _ in range(200):
        n = rng.randint(150, 400)
        k = rng.randint(0, n)
        assert binom(n, k) == math.comb(n, k)


def test_binom_edges():
    assert binom(0, 0) == 1
    assert binom(5, -1) == 0
    assert binom(5, 6) == 0
    with pytest.raises(ValueError):
        binom(-1, 0)


def test_hm_size_frozen_values():
    # k = 2..8 instances pinned from the closed form, cross-added by hand:
    # C(n-1,k-1) - C(n-k-1,k-1) + 1
    assert hm_size(5, 2) == 3
    assert hm_size(7, 3) == 13
    assert hm_size(9, 4) == 53
    assert hm_size(17, 8) == 11433


def test_hm_size_definition_against_pascal_oracle():
    tri = pascal_oracle(40)
    for k in range(2, 10):
        for n in range(2 * k, 41):
            assert hm_size(n, k) == tri[n - 1][k - 1] - binom(n - k - 1, k - 1) + 1


def test_hm_size_domain():
    with pytest.raises(ValueError):
        hm_size(5, 1)
    with pytest.raises(ValueError):
        hm_size(5, 3)


def test_exceeds_two_b_equals_rational_comparison():
    rng = random.Random(7)
    for _ in range(500):
        a = rng.randint(1, 10**6)
        h2 = rng.randint(0, 10**12)
        b = rng.randint(0, 10**6)
        assert exceeds_two_b(a, h2, b) == (a + Fraction(h2, a) > 2 * b)
    with pytest.raises(ValueError):
        exceeds_two_b(0, 1, 1)


def test_pow_ratio_lt_equals_fraction_comparison():
    rng = random.Random(11)
    for _ in range(300):
        p = rng.randint(1, 30)
        q = rng.randint(1, 30)
        e = rng.randint(0, 12)
        r = Fraction(rng.randint(1, 50), rng.randint(1, 50))
        assert pow_ratio_lt(p, q, e, r) == (Fraction(p, q) ** e < r)
    with pytest.raises(ValueError):
        pow_ratio_lt(0, 1, 1, Fraction(1))
    with pytest.raises(ValueError):
        pow_ratio_lt(1, 1, -1, Fraction(1))


def test_f_lemma_small_values():
    assert f_lemma(1) == 162
    assert f_lemma(2) == Fraction(162 * 4 * 3, 5)
    with pytest.raises(ValueError):
        f_lemma(0)


def test_f_lemma_first_drop_below_one_is_k24():
    # exact rational comparisons; the threshold was located by scanning
    assert f_lemma(23) > 1
    assert f_lemma(24) < 1
    assert Fraction(736, 1000) < f_lemma(24) < Fraction(738, 1000)


def test_ratio_decimal_rendering():
    assert ratio_decimal(Fraction(1, 8), 3) == "0.125"
    assert ratio_decimal(Fraction(-1, 8), 3) == "-0.125"
    assert ratio_decimal(Fraction(1, 3), 4) == "0.3333"
    assert ratio_decimal(Fraction(2, 3), 4) == "0.6667"
    # round half up at the last digit
    assert ratio_decimal(Fraction(1, 2), 0) == "1"
    assert ratio_decimal(Fraction(5, 100), 1) == "0.1"
    assert ratio_decimal(f_lemma(24), 6) == "0.736913"
    with pytest.raises(ValueError):
        ratio_decimal(Fraction(1), -1)
