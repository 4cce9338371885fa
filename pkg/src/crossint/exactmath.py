"""Exact integer and rational arithmetic for the inequality certificates.

Every comparison that decides a certificate goes through arbitrary
precision integers or `fractions.Fraction`; floats appear only when a
report renders a value for humans.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction

ExactInt = int
ExactRatio = Fraction

# Rows of Pascal's triangle, extended on demand up to _MEMO_CAP.  Rows are
# append-only and published whole, so readers never see a partial row.
_MEMO_CAP = 200
_rows: list[list[int]] = [[1]]
_rows_lock = threading.Lock()


def _row(n: int) -> list[int]:
    if n < len(_rows):
        return _rows[n]
    with _rows_lock:
        while len(_rows) <= n:
            prev = _rows[-1]
            nxt = [1]
            nxt.extend(prev[i] + prev[i + 1] for i in range(len(prev) - 1))
            nxt.append(1)
            _rows.append(nxt)
    return _rows[n]


def binom(n: int, k: int) -> ExactInt:
    """C(n, k); zero when k < 0 or k > n.  Total for n >= 0."""
    if n < 0:
        raise ValueError("binom: n must be nonnegative")
    if k < 0 or k > n:
        return 0
    if n > _MEMO_CAP:
        return math.comb(n, k)
    return _row(n)[k]


def hm_size(n: int, k: int) -> ExactInt:
    """C(n-1,k-1) - C(n-k-1,k-1) + 1, the size of the extremal non-trivial
    intersecting family.  Defined for n >= 2k, k >= 2 (n = 2k only for
    diagnostics)."""
    if k < 2:
        raise ValueError("hm_size: k must be at least 2")
    if n < 2 * k:
        raise ValueError("hm_size: n must be at least 2k")
    return binom(n - 1, k - 1) - binom(n - k - 1, k - 1) + 1


def exceeds_two_b(a: ExactInt, h2: ExactInt, b: ExactInt) -> bool:
    """Decide a + h2/a > 2b exactly via a*a + h2 > 2*a*b (needs a > 0)."""
    if a <= 0:
        raise ValueError("exceeds_two_b: a must be positive")
    return a * a + h2 > 2 * a * b


def pow_ratio_lt(p: int, q: int, e: int, r: ExactRatio) -> bool:
    """Decide (p/q)**e < r by cross-multiplication, no rounding."""
    if p <= 0 or q <= 0:
        raise ValueError("pow_ratio_lt: p and q must be positive")
    if e < 0:
        raise ValueError("pow_ratio_lt: exponent must be nonnegative")
    r = Fraction(r)
    return p**e * r.denominator < r.numerator * q**e


def f_lemma(k: int) -> ExactRatio:
    """162 * k^2 * (3/5)^(k-1) as an exact rational."""
    if k < 1:
        raise ValueError("f_lemma: k must be positive")
    return Fraction(162 * k * k * 3 ** (k - 1), 5 ** (k - 1))


def ratio_decimal(r: ExactRatio, digits: int = 6) -> str:
    """Fixed-point decimal rendering of an exact rational (round half up)."""
    if digits < 0:
        raise ValueError("ratio_decimal: digits must be nonnegative")
    r = Fraction(r)
    sign = "-" if r < 0 else ""
    num, den = abs(r.numerator), r.denominator
    scale = 10**digits
    scaled = (num * scale * 2 + den) // (2 * den)
    whole, frac = divmod(scaled, scale)
    if digits == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{digits}d}"
