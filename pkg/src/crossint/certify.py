"""Exact certificates for the binomial inequalities behind the product
bound, plus the appendix-style threshold scans.

Every record stores the two cross-multiplied integers actually compared,
so a certificate can be re-checked externally with one comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from ._doc import now_iso, read_doc, write_doc, TOOL_VERSION
from .exactmath import binom, exceeds_two_b, f_lemma, hm_size, pow_ratio_lt, ratio_decimal

LEMMA_IDS = ("ratio_bound", "key", "key1", "key2", "ratio_3k", "f_mono", "pow57_threshold")

# Direction of the comparison that makes a record hold.
DIRECTION = {
    "ratio_bound": ">",
    "key": ">",
    "key1": ">",
    "key2": ">",
    "ratio_3k": "<",
    "f_mono": "<",
    "pow57_threshold": "<",
}

OUTSIDE_RANGE = "outside_paper_range"


@dataclass(frozen=True)
class CertRecord:
    lemma_id: str
    n: int
    k: int
    t: int | None
    lhs: int
    rhs: int
    holds: bool
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class Certificate:
    lemma_id: str
    params: dict
    records: tuple[CertRecord, ...]
    all_hold: bool
    produced_at: str = field(default_factory=now_iso)
    tool_version: str = TOOL_VERSION


def _range_gate(name: str, inside: bool, strict: bool) -> tuple[str, ...]:
    if inside:
        return ()
    if strict:
        raise ValueError(f"{name}: parameters outside the certified range")
    return (OUTSIDE_RANGE,)


def check_ratio_bound(n: int, k: int, t: int, strict: bool = True) -> CertRecord:
    """h(n,k)^2 * (2t-1)^(k-1) > C(n-1,k-1)^2 * ((2t-1)^(k-1) - 2(2t-3)^(k-1))
    for 2k < n <= tk."""
    if t < 3:
        raise ValueError("ratio_bound: t must be at least 3")
    if k < 2:
        raise ValueError("ratio_bound: k must be at least 2")
    if n < 2 * k:
        raise ValueError("ratio_bound: n must be at least 2k")
    flags = _range_gate("ratio_bound", 2 * k < n <= t * k, strict)
    h = hm_size(n, k)
    c = binom(n - 1, k - 1)
    d = (2 * t - 1) ** (k - 1)
    e = (2 * t - 3) ** (k - 1)
    lhs = h * h * d
    rhs = c * c * (d - 2 * e)
    return CertRecord("ratio_bound", n, k, t, lhs, rhs, lhs > rhs, flags)


def _check_key_style(lemma_id: str, n: int, k: int, a: int, inside: bool, strict: bool) -> CertRecord:
    flags = _range_gate(lemma_id, inside, strict)
    h = hm_size(n, k)
    b = binom(n - 1, k - 1)
    holds = exceeds_two_b(a, h * h, b)
    return CertRecord(lemma_id, n, k, None, a * a + h * h, 2 * a * b, holds, flags)


def check_key(n: int, k: int, strict: bool = True) -> CertRecord:
    """A + h^2/A > 2C(n-1,k-1) with A = C(n-2,k-2) + 2C(n-3,k-2), certified
    range 2k+1 <= n <= 3k."""
    if k < 2:
        raise ValueError("key: k must be at least 2")
    if n < 2 * k:
        raise ValueError("key: n must be at least 2k")
    a = binom(n - 2, k - 2) + 2 * binom(n - 3, k - 2)
    return _check_key_style("key", n, k, a, 2 * k + 1 <= n <= 3 * k, strict)


def check_key1(n: int, k: int, strict: bool = True) -> CertRecord:
    """Same shape with A = C(n-2,k-2) + C(n-4,k-2), range 2k+1 <= n <= 4k."""
    if k < 2:
        raise ValueError("key1: k must be at least 2")
    if n < 2 * k:
        raise ValueError("key1: n must be at least 2k")
    a = binom(n - 2, k - 2) + binom(n - 4, k - 2)
    return _check_key_style("key1", n, k, a, 2 * k + 1 <= n <= 4 * k, strict)


def check_key2(n: int, k: int, strict: bool = True) -> CertRecord:
    """Same shape with A = C(n,k-2), range 3k <= n <= 4k."""
    if k < 2:
        raise ValueError("key2: k must be at least 2")
    if n < 2 * k:
        raise ValueError("key2: n must be at least 2k")
    a = binom(n, k - 2)
    return _check_key_style("key2", n, k, a, 3 * k <= n <= 4 * k, strict)


def check_ratio_3k(n: int, k: int) -> CertRecord:
    """C(n,k-2) < C(n-2,k-2) + 2C(n-3,k-2), asserted for n >= 3k.  Queries
    with 2k <= n < 3k are answered as computed, flagged outside the range."""
    if k < 3:
        raise ValueError("ratio_3k: k must be at least 3")
    if n < 2 * k:
        raise ValueError("ratio_3k: n must be at least 2k")
    flags = () if n >= 3 * k else (OUTSIDE_RANGE,)
    lhs = binom(n, k - 2)
    rhs = binom(n - 2, k - 2) + 2 * binom(n - 3, k - 2)
    return CertRecord("ratio_3k", n, k, None, lhs, rhs, lhs < rhs, flags)


def check_f_mono(k: int) -> CertRecord:
    """f(k+1) < f(k), decided by 3(k+1)^2 < 5k^2.  The record's n slot
    carries k+1."""
    if k < 1:
        raise ValueError("f_mono: k must be positive")
    lhs = 3 * (k + 1) ** 2
    rhs = 5 * k * k
    return CertRecord("f_mono", k + 1, k, None, lhs, rhs, lhs < rhs)


def check_pow57(k: int) -> CertRecord:
    """(5/7)^(k-1) < 1/32, decided by 32 * 5^(k-1) < 7^(k-1).  n unused."""
    if k < 1:
        raise ValueError("pow57_threshold: k must be positive")
    lhs = 32 * 5 ** (k - 1)
    rhs = 7 ** (k - 1)
    return CertRecord("pow57_threshold", 0, k, None, lhs, rhs, lhs < rhs)


def lemma_x(lemma_id: str, n: int, k: int) -> Fraction:
    """The exact rational x with A = x * C(n-1,k-1) for the key-style
    lemmas; used to validate the algebraic identities."""
    if lemma_id == "key":
        return Fraction((k - 1) * (3 * n - 2 * k - 2), (n - 1) * (n - 2))
    if lemma_id == "key1":
        return Fraction(k - 1, n - 1) + Fraction(
            (k - 1) * (n - k) * (n - k - 1), (n - 1) * (n - 2) * (n - 3)
        )
    if lemma_id == "key2":
        return Fraction((k - 1) * n, (n - k + 2) * (n - k + 1))
    raise ValueError(f"no x identity for lemma {lemma_id!r}")


def grid_n_range(lemma_id: str, k: int, t: int | None = None) -> range:
    """Canonical certified n-window for one k.  ratio_3k is certified on
    the window [3k, 4k] (its claim is unbounded above)."""
    if lemma_id == "key":
        return range(2 * k + 1, 3 * k + 1)
    if lemma_id == "key1":
        return range(2 * k + 1, 4 * k + 1)
    if lemma_id == "key2":
        return range(3 * k, 4 * k + 1)
    if lemma_id == "ratio_bound":
        if t is None:
            raise ValueError("ratio_bound grid needs t")
        return range(2 * k + 1, t * k + 1)
    if lemma_id == "ratio_3k":
        return range(3 * k, 4 * k + 1)
    raise ValueError(f"no (n,k) grid for lemma {lemma_id!r}")


_POINT_CHECKS = {
    "key": check_key,
    "key1": check_key1,
    "key2": check_key2,
}


def certify_grid(lemma_id: str, k_lo: int, k_hi: int, t: int | None = None) -> Certificate:
    """One record per point of the lemma's full certified grid, k then n
    ascending."""
    if lemma_id not in LEMMA_IDS:
        raise ValueError(f"unknown lemma {lemma_id!r}")
    if k_lo > k_hi:
        raise ValueError("empty k range")
    records: list[CertRecord] = []
    for k in range(k_lo, k_hi + 1):
        if lemma_id == "f_mono":
            records.append(check_f_mono(k))
        elif lemma_id == "pow57_threshold":
            records.append(check_pow57(k))
        elif lemma_id == "ratio_bound":
            for n in grid_n_range(lemma_id, k, t):
                records.append(check_ratio_bound(n, k, t))
        elif lemma_id == "ratio_3k":
            for n in grid_n_range(lemma_id, k):
                records.append(check_ratio_3k(n, k))
        else:
            point = _POINT_CHECKS[lemma_id]
            for n in grid_n_range(lemma_id, k):
                records.append(point(n, k))
    params = {"k_lo": k_lo, "k_hi": k_hi}
    if t is not None:
        params["t"] = t
    return Certificate(lemma_id, params, tuple(records), all(r.holds for r in records))


def recompute_record(rec: CertRecord, strict: bool = False) -> CertRecord:
    """Rebuild a record from its parameters alone (reproducibility check)."""
    if rec.lemma_id == "ratio_bound":
        assert rec.t is not None
        return check_ratio_bound(rec.n, rec.k, rec.t, strict=strict)
    if rec.lemma_id == "key":
        return check_key(rec.n, rec.k, strict=strict)
    if rec.lemma_id == "key1":
        return check_key1(rec.n, rec.k, strict=strict)
    if rec.lemma_id == "key2":
        return check_key2(rec.n, rec.k, strict=strict)
    if rec.lemma_id == "ratio_3k":
        return check_ratio_3k(rec.n, rec.k)
    if rec.lemma_id == "f_mono":
        return check_f_mono(rec.k)
    if rec.lemma_id == "pow57_threshold":
        return check_pow57(rec.k)
    raise ValueError(f"unknown lemma {rec.lemma_id!r}")


def verify_certificate(cert: Certificate) -> bool:
    """Recompute every record and require bit-exact agreement."""
    for rec in cert.records:
        again = recompute_record(rec, strict=False)
        if (again.lhs, again.rhs, again.holds) != (rec.lhs, rec.rhs, rec.holds):
            return False
    return cert.all_hold == all(r.holds for r in cert.records)


def appendix_threshold_scan(
    max_k: int,
    reference_pow57_k: int = 11,
    reference_f_k: int = 24,
) -> dict:
    """Exact threshold scans: minimal k with (5/7)^(k-1) < 1/32, minimal
    k >= 2 with f(k) < 1, and monotone decrease of f from k = 24 up to
    max_k.  Mismatches against the reference thresholds are flagged, not
    suppressed."""
    if max_k < 12:
        raise ValueError("appendix scan needs max_k >= 12")
    one_32 = Fraction(1, 32)
    pow_min_k = next(
        (k for k in range(2, max_k + 1) if pow_ratio_lt(5, 7, k - 1, one_32)), None
    )
    f_min_k = next((k for k in range(2, max_k + 1) if f_lemma(k) < 1), None)
    mono_from = 24
    mono_ok = all(f_lemma(k + 1) < f_lemma(k) for k in range(mono_from, max_k))
    return {
        "max_k": max_k,
        "pow57": {
            "min_k": pow_min_k,
            "reference_k": reference_pow57_k,
            "matches_reference": pow_min_k == reference_pow57_k,
        },
        "f_below_one": {
            "min_k": f_min_k,
            "reference_k": reference_f_k,
            "matches_reference": f_min_k == reference_f_k,
            "value_at_min": None if f_min_k is None else ratio_decimal(f_lemma(f_min_k), 6),
        },
        "f_monotone": {
            "from_k": mono_from,
            "to_k": max_k,
            "all_decreasing": mono_ok,
        },
    }


def certificate_to_doc(cert: Certificate) -> dict:
    return {
        "schema": "cert/1",
        "lemma_id": cert.lemma_id,
        "direction": DIRECTION[cert.lemma_id],
        "params": cert.params,
        "records": [
            {
                "n": r.n,
                "k": r.k,
                "t": r.t,
                "lhs": r.lhs,
                "rhs": r.rhs,
                "holds": r.holds,
                "flags": list(r.flags),
            }
            for r in cert.records
        ],
        "all_hold": cert.all_hold,
        "produced_at": cert.produced_at,
        "tool_version": cert.tool_version,
    }


def certificate_from_doc(doc: dict) -> Certificate:
    if doc.get("schema") != "cert/1":
        raise ValueError(f"not a cert/1 document: {doc.get('schema')!r}")
    records = tuple(
        CertRecord(
            doc["lemma_id"], r["n"], r["k"], r["t"], r["lhs"], r["rhs"], r["holds"],
            tuple(r.get("flags", ())),
        )
        for r in doc["records"]
    )
    return Certificate(
        doc["lemma_id"], doc["params"], records, doc["all_hold"],
        doc["produced_at"], doc["tool_version"],
    )


def write_certificate(path: str | Path, cert: Certificate) -> Path:
    return write_doc(path, certificate_to_doc(cert))


def read_certificate(path: str | Path) -> Certificate:
    return certificate_from_doc(read_doc(path, expect_schema="cert/1"))
