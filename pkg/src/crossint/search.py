"""Exact and budgeted search for max |F|*|G| over non-trivial
cross-intersecting pairs, plus seeded randomized drivers for the
structural results the product bound leans on.

The exact searches fix G = transversal(F).  This loses nothing: for any
valid pair (F, G), replacing G by transversal(F) keeps the pair
cross-intersecting, cannot create a common element (supersets only
shrink the common intersection), and never decreases the product.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass
from pathlib import Path
from random import Random
from typing import Callable, Sequence

import numpy as np
from filelock import FileLock

from ._doc import now_iso, read_doc, write_doc, TOOL_VERSION
from ._kernels import BBState, backend, oracle_products, pairs_all_intersect
from .exactmath import binom, hm_size
from .family import (
    Family,
    all_ksets,
    are_cross_intersecting,
    diversity,
    example1_pair,
    family_to_doc,
    hm_family,
    is_non_trivial,
    max_degree_elements,
    restrict_in,
    star,
    transversal,
)
from .kset import GroundSpec, lex_family
from .shifting import is_shifted, weight_pair

_ORACLE_CAP = 21
_BB_CAP = 4096


@dataclass(frozen=True)
class SearchReport:
    n: int
    k: int
    best_product: int
    best_pair: tuple[Family, Family] | None
    optimal: bool
    nodes_explored: int
    budget_exhausted: bool
    hm_square: int | None
    matches_conjecture: bool | None


@dataclass(frozen=True)
class TrialReport:
    property_id: str
    n: int
    k: int
    u: int | None
    trials: int
    seed: int
    hypothesis_hits: int
    violations: int
    vacuous: bool
    first_witness: tuple[Family, Family] | None


def _kills(masks: Sequence[int]) -> list[int]:
    """kills[i] = bitmask over candidate indices of sets disjoint from i."""
    m = len(masks)
    out = [0] * m
    for i in range(m):
        mi = masks[i]
        acc = 0
        for j in range(m):
            if not mi & masks[j]:
                acc |= 1 << j
        out[i] = acc
    return out


def _not_elem(masks: Sequence[int], n: int) -> list[int]:
    """not_elem[e-1] = bitmask over candidates not containing element e."""
    out = [0] * n
    for j, mask in enumerate(masks):
        for e in range(1, n + 1):
            if not mask & (1 << (e - 1)):
                out[e - 1] |= 1 << j
    return out


def _bit_indices(s: int) -> list[int]:
    out = []
    while s:
        low = s & -s
        out.append(low.bit_length() - 1)
        s ^= low
    return out


def _subset_pair(n: int, k: int, kills: Sequence[int], s: int) -> tuple[Family, Family]:
    """(F, transversal(F)) for the candidate subset s."""
    uni = all_ksets(n, k)
    f_members = tuple(uni.members[i] for i in _bit_indices(s))
    g_members = tuple(uni.members[j] for j in range(len(uni)) if kills[j] & s == 0)
    return Family(uni.ground, f_members), Family(uni.ground, g_members)


def _assert_valid_pair(f: Family, g: Family) -> None:
    if not (are_cross_intersecting(f, g) and is_non_trivial(f) and is_non_trivial(g)):
        raise RuntimeError("search produced a pair violating its own postcondition")


def _hm_square(n: int, k: int) -> int | None:
    if k >= 2 and n >= 2 * k:
        h = hm_size(n, k)
        return h * h
    return None


def brute_oracle(n: int, k: int) -> SearchReport:
    """Sweep every subset of the candidate k-sets, score |F| * |T(F)| for
    the non-trivial/non-trivial cases, and take the exact maximum."""
    m = binom(n, k)
    if not 1 <= k <= n:
        raise ValueError("brute_oracle needs 1 <= k <= n")
    if m > _ORACLE_CAP:
        raise ValueError(f"instance too large: C({n},{k}) = {m} > {_ORACLE_CAP}")
    masks = all_ksets(n, k).masks
    kills = _kills(masks)
    products = oracle_products(kills, _not_elem(masks, n), m)
    best = int(products.max())
    pair = None
    if best > 0:
        pair = _subset_pair(n, k, kills, int(products.argmax()))
        _assert_valid_pair(*pair)
    hm2 = _hm_square(n, k)
    return SearchReport(
        n=n,
        k=k,
        best_product=best,
        best_pair=pair,
        optimal=True,
        nodes_explored=1 << m,
        budget_exhausted=False,
        hm_square=hm2,
        matches_conjecture=None if hm2 is None else best == hm2,
    )


def oracle_optima(n: int, k: int) -> tuple[int, list[tuple[Family, Family]]]:
    """All maximizing (F, transversal(F)) pairs, ascending in subset order."""
    m = binom(n, k)
    if m > _ORACLE_CAP:
        raise ValueError(f"instance too large: C({n},{k}) = {m} > {_ORACLE_CAP}")
    masks = all_ksets(n, k).masks
    kills = _kills(masks)
    products = oracle_products(kills, _not_elem(masks, n), m)
    best = int(products.max())
    if best == 0:
        return 0, []
    subsets = np.nonzero(products == best)[0]
    return best, [_subset_pair(n, k, kills, int(s)) for s in subsets]


def max_product_search(n: int, k: int, budget: float | None = None) -> SearchReport:
    """Branch and bound over lex-ordered membership decisions, pruning with
    (|F so far| + remaining) * |T(F so far)| <= best.  Within budget it is
    exhaustive; on exhaustion it reports the best pair found so far."""
    if not 1 <= k <= n <= 64:
        raise ValueError("max_product_search needs 1 <= k <= n <= 64")
    m = binom(n, k)
    if m > _BB_CAP:
        raise ValueError(f"instance too large: C({n},{k}) = {m} > {_BB_CAP}")
    masks = all_ksets(n, k).masks
    kills = _kills(masks)

    seed_pair: tuple[Family, Family] | None = None
    seed_best = 0
    if k >= 2 and n > 2 * k:
        hm = hm_family(n, k)
        seed_pair = (hm, hm)
        seed_best = len(hm) * len(hm)

    state = BBState(kills, masks, (1 << n) - 1, seed_best)
    node_limit = 262_144 if backend() == "numba" and m <= 64 else 16_384
    deadline = None if budget is None else time.monotonic() + budget
    while not state.done:
        if deadline is not None and time.monotonic() >= deadline:
            break
        state.run_slice(node_limit)

    optimal = state.done
    if state.best_s:
        pair = _subset_pair(n, k, kills, state.best_s)
        best = state.best
        if best != len(pair[0]) * len(pair[1]):
            raise RuntimeError("bound bookkeeping disagrees with reconstructed pair")
    else:
        pair, best = seed_pair, seed_best
    if pair is not None:
        _assert_valid_pair(*pair)
    hm2 = _hm_square(n, k)
    return SearchReport(
        n=n,
        k=k,
        best_product=best,
        best_pair=pair,
        optimal=optimal,
        nodes_explored=state.nodes,
        budget_exhausted=not optimal,
        hm_square=hm2,
        matches_conjecture=(best == hm2) if (optimal and hm2 is not None) else None,
    )


# --- randomized drivers ----------------------------------------------------


def _sample_subfamily(rng: Random, fam: Family, size: int) -> Family:
    size = max(0, min(size, len(fam)))
    idx = rng.sample(range(len(fam)), size)
    return Family(fam.ground, tuple(fam.members[i] for i in sorted(idx)))


def _random_ci_pair(rng: Random, n: int, k: int, cap: int) -> tuple[Family, Family]:
    """F random, G a random subfamily of transversal(F): CI by construction."""
    uni = all_ksets(n, k)
    f = _sample_subfamily(rng, uni, rng.randint(1, min(len(uni), cap)))
    t = transversal(f, k)
    if not len(t):
        return f, Family(t.ground, ())
    g = _sample_subfamily(rng, t, rng.randint(1, min(len(t), cap)))
    return f, g


def _random_intersecting_anchor_masks(rng: Random, n: int, k: int, l: int) -> tuple[int, int]:
    """Two intersecting sets of sizes k and l inside [2, n]."""
    overlap = rng.randint(1, min(k, l))
    pool = list(range(2, n + 1))
    common = rng.sample(pool, overlap)
    rest = [e for e in pool if e not in common]
    extra_f = rng.sample(rest, k - overlap)
    rest_g = [e for e in rest if e not in extra_f]
    extra_g = rng.sample(rest_g, l - overlap)
    fm = sum(1 << (e - 1) for e in common + extra_f)
    gm = sum(1 << (e - 1) for e in common + extra_g)
    return fm, gm


def hilton_trial(n: int, k: int, trials: int, seed: int) -> TrialReport:
    """Lex compression keeps cross-intersection: for random CI pairs, the
    pair (L(n,k,|F|), L(n,k,|G|)) must be CI."""
    if n > 16:
        raise ValueError("hilton_trial capped at n <= 16")
    rng = Random(seed)
    g1 = GroundSpec(1, n, k)
    hits = violations = 0
    witness = None
    for _ in range(trials):
        f, g = _random_ci_pair(rng, n, k, cap=24)
        hits += 1
        lf = lex_family(g1, len(f))
        lg = lex_family(g1, len(g))
        if not are_cross_intersecting(lf, lg):
            violations += 1
            if witness is None:
                witness = (f, g)
    return TrialReport("hilton", n, k, None, trials, seed, hits, violations, hits == 0, witness)


def _masks_intersecting(masks: Sequence[int]) -> bool:
    return pairs_all_intersect(masks, masks)


def _masks_common(masks: Sequence[int], full: int) -> int:
    acc = full
    for m in masks:
        acc &= m
        if not acc:
            break
    return acc


def star_split_trial(n: int, k: int, trials: int, seed: int) -> TrialReport:
    """Splitting along element 1 into lex-compressed star and off-star
    parts: under the degree hypothesis the cross unions are intersecting;
    under the strict hypothesis they are non-trivial and the sizes obey
    |F| + |G| <= 2 h(n,k)."""
    if n > 16:
        raise ValueError("star_split_trial capped at n <= 16")
    if k < 2 or n <= 2 * k:
        raise ValueError("star_split_trial needs n > 2k >= 4")
    rng = Random(seed)
    thr = binom(n - 2, k - 2)
    full = (1 << n) - 1
    g1n = GroundSpec(1, n, k)
    g2n = GroundSpec(2, n, k)
    hits = violations = 0
    witness = None
    for _ in range(trials):
        if rng.random() < 0.7:
            fm, gm = _random_intersecting_anchor_masks(rng, n, k, k)
            f_full, g_full = _example1_cached(n, k, fm, gm)
            f = _anchored_subsample(rng, f_full, thr)
            g = _anchored_subsample(rng, g_full, thr)
        else:
            f, g = _random_ci_pair(rng, n, k, cap=binom(n - 1, k - 1))
        deg_f = len(restrict_in(f, 1))
        deg_g = len(restrict_in(g, 1))
        if not (is_non_trivial(f) and is_non_trivial(g) and min(deg_f, deg_g) >= thr):
            continue
        hits += 1
        f1 = lex_family(g1n, deg_f)
        f0 = lex_family(g2n, len(f) - deg_f)
        gg1 = lex_family(g1n, deg_g)
        gg0 = lex_family(g2n, len(g) - deg_g)
        union_a = f0.masks + gg1.masks
        union_b = f1.masks + gg0.masks
        ok = _masks_intersecting(union_a) and _masks_intersecting(union_b)
        if ok and min(deg_f, deg_g) > thr:
            ok = (
                _masks_common(union_a, full) == 0
                and _masks_common(union_b, full) == 0
                and len(f) + len(g) <= 2 * hm_size(n, k)
            )
        if not ok:
            violations += 1
            if witness is None:
                witness = (f, g)
    return TrialReport(
        "starsplit", n, k, None, trials, seed, hits, violations, hits == 0, witness
    )


_example1_memo: dict[tuple[int, int, int, int], tuple[Family, Family]] = {}


def _example1_cached(n: int, k: int, fm: int, gm: int) -> tuple[Family, Family]:
    key = (n, k, fm, gm)
    if key not in _example1_memo:
        if len(_example1_memo) > 4096:
            _example1_memo.clear()
        _example1_memo[key] = example1_pair(n, k, _bits_to_elems(fm), _bits_to_elems(gm))
    return _example1_memo[key]


def _bits_to_elems(mask: int) -> tuple[int, ...]:
    return tuple(b + 1 for b in _bit_indices(mask))


def _anchored_subsample(rng: Random, fam: Family, thr: int) -> Family:
    """Keep the anchor (the unique member avoiding 1) and a random chunk of
    the star part, biased to sizes around the degree threshold."""
    anchor = [m for m in fam.members if not m.mask & 1]
    rest = [m for m in fam.members if m.mask & 1]
    lo = max(1, min(thr - 1, len(rest)))
    size = rng.randint(lo, len(rest))
    keep = [rest[i] for i in sorted(rng.sample(range(len(rest)), size))]
    members = sorted(anchor + keep, key=lambda ks: ks.elements)
    return Family(fam.ground, tuple(members))


def fk_diversity_trial(n: int, k: int, u: int, trials: int, seed: int) -> TrialReport:
    """Above the size threshold, CI pairs have diversity below
    C(n-u-1,k-u) and share one element of uniquely largest degree."""
    if not 3 <= u <= k:
        raise ValueError("fk_diversity_trial needs 3 <= u <= k")
    if n < 2 * k:
        raise ValueError("fk_diversity_trial needs n >= 2k")
    rng = Random(seed)
    thr = binom(n - 1, k - 1) - binom(n - u - 1, k - 1) + binom(n - u - 1, k - u)
    bound = binom(n - u - 1, k - u)
    hits = violations = 0
    witness = None
    uni = all_ksets(n, k)
    for _ in range(trials):
        center = 1 if rng.random() < 0.8 else rng.randint(1, n)
        base = star(n, k, center)
        lo = max(1, min(thr - 3, len(base)))
        f = _sample_subfamily(rng, base, rng.randint(lo, len(base)))
        if rng.random() < 0.1:
            extra = uni.members[rng.randrange(len(uni))]
            if extra not in f:
                f = Family(f.ground, tuple(sorted((*f.members, extra), key=lambda m: m.elements)))
        t = transversal(f, k)
        if not len(t):
            continue
        g = _sample_subfamily(rng, t, rng.randint(max(1, lo), len(t)))
        if not (len(f) > thr and len(g) > thr):
            continue
        hits += 1
        top_f = max_degree_elements(f)
        top_g = max_degree_elements(g)
        ok = (
            diversity(f) < bound
            and diversity(g) < bound
            and len(top_f) == 1
            and top_f == top_g
        )
        if not ok:
            violations += 1
            if witness is None:
                witness = (f, g)
    return TrialReport("fk", n, k, u, trials, seed, hits, violations, hits == 0, witness)


def size_sum_trial(n: int, k: int, trials: int, seed: int) -> TrialReport:
    """CI pairs whose smaller side reaches C(n-3,k-3) + C(n-4,k-3) satisfy
    |F| + |G| <= 2 C(n-1,k-1)."""
    if n < 2 * k or k < 3:
        raise ValueError("size_sum_trial needs n >= 2k and k >= 3")
    rng = Random(seed)
    thr = binom(n - 3, k - 3) + binom(n - 4, k - 3)
    bound = 2 * binom(n - 1, k - 1)
    hits = violations = 0
    witness = None
    for _ in range(trials):
        roll = rng.random()
        if roll < 0.05:
            center = rng.randint(1, n)
            f = star(n, k, center)
            g = transversal(f, k)
        elif roll < 0.45:
            center = 1 if rng.random() < 0.5 else rng.randint(1, n)
            base = star(n, k, center)
            f = _sample_subfamily(rng, base, rng.randint(1, len(base)))
            t = transversal(f, k)
            if not len(t):
                continue
            g = _sample_subfamily(rng, t, rng.randint(1, len(t)))
        else:
            f, g = _random_ci_pair(rng, n, k, cap=40)
        if min(len(f), len(g)) < thr:
            continue
        hits += 1
        if len(f) + len(g) > bound:
            violations += 1
            if witness is None:
                witness = (f, g)
    return TrialReport("sizesum", n, k, None, trials, seed, hits, violations, hits == 0, witness)


def prop21_diagnostic(n: int, k: int) -> dict:
    """For every oracle-scale maximizer, report which of the structural
    conclusions it satisfies (product within the conjectured square, or the
    two min-size bounds), together with its weight and shiftedness.

    `violations` counts only maximizers that are shifted on both sides yet
    satisfy neither branch of the shifted disjunction; that combination is
    checkable without tracking the compression dynamics.  `apparent_violations`
    lists maximizers matching no conclusion at all and is diagnostic only,
    because the shift-resistant branch quantifies over weight-minimal
    maximizers."""
    best, optima = oracle_optima(n, k)
    hm2 = _hm_square(n, k)
    shifted_bound = binom(n, k - 2)
    resistant_bound = binom(n - 2, k - 2) + binom(n - 4, k - 2)
    entries = []
    unexplained = []
    genuine = 0
    for idx, (f, g) in enumerate(optima):
        min_size = min(len(f), len(g))
        branches = {
            "product_le_hm_square": None if hm2 is None else best <= hm2,
            "min_le_shifted_bound": min_size <= shifted_bound,
            "min_le_resistant_bound": min_size <= resistant_bound,
        }
        if not any(v for v in branches.values() if v is not None):
            unexplained.append(idx)
        both_shifted = is_shifted(f) and is_shifted(g)
        if (
            both_shifted
            and hm2 is not None
            and not branches["product_le_hm_square"]
            and not branches["min_le_shifted_bound"]
        ):
            genuine += 1
        entries.append(
            {
                "f_sets": [list(m.elements) for m in f.members],
                "g_sets": [list(m.elements) for m in g.members],
                "size_f": len(f),
                "size_g": len(g),
                "product": len(f) * len(g),
                "weight": weight_pair(f, g),
                "both_shifted": both_shifted,
                "branches": branches,
            }
        )
    return {
        "n": n,
        "k": k,
        "best_product": best,
        "hm_square": hm2,
        "shifted_min_bound": shifted_bound,
        "resistant_min_bound": resistant_bound,
        "optima_count": len(entries),
        "optima": entries,
        "violations": genuine,
        "apparent_violations": unexplained,
    }


# --- report documents and the results cache --------------------------------


def search_report_to_doc(r: SearchReport) -> dict:
    return {
        "schema": "report/1",
        "kind": "search",
        "n": r.n,
        "k": r.k,
        "best_product": r.best_product,
        "optimal": r.optimal,
        "nodes_explored": r.nodes_explored,
        "budget_exhausted": r.budget_exhausted,
        "hm_square": r.hm_square,
        "matches_conjecture": r.matches_conjecture,
        "best_f": None if r.best_pair is None else family_to_doc(r.best_pair[0]),
        "best_g": None if r.best_pair is None else family_to_doc(r.best_pair[1]),
        "produced_at": now_iso(),
        "tool_version": TOOL_VERSION,
    }


def trial_report_to_doc(r: TrialReport) -> dict:
    return {
        "schema": "report/1",
        "kind": "trial",
        "property_id": r.property_id,
        "n": r.n,
        "k": r.k,
        "u": r.u,
        "trials": r.trials,
        "seed": r.seed,
        "hypothesis_hits": r.hypothesis_hits,
        "violations": r.violations,
        "vacuous": r.vacuous,
        "first_witness": None
        if r.first_witness is None
        else {
            "f": family_to_doc(r.first_witness[0]),
            "g": family_to_doc(r.first_witness[1]),
        },
        "produced_at": now_iso(),
        "tool_version": TOOL_VERSION,
    }


def prop21_report_to_doc(diag: dict) -> dict:
    return {
        "schema": "report/1",
        "kind": "prop21",
        **diag,
        "produced_at": now_iso(),
        "tool_version": TOOL_VERSION,
    }


def cache_dir() -> Path:
    env = os.environ.get("CROSSINT_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "crossint"


def cached_report(n: int, k: int, mode: str, compute: Callable[[], dict]) -> tuple[dict, bool]:
    """Fetch or fill the (n, k, mode, tool_version)-keyed results cache.
    Returns (document, came_from_cache)."""
    directory = cache_dir()
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{mode}-n{n}-k{k}-v{TOOL_VERSION}.json"
    with FileLock(str(path) + ".lock"):
        if path.exists():
            try:
                return read_doc(path, expect_schema="report/1"), True
            except (ValueError, KeyError):
                pass
        doc = compute()
        write_doc(path, doc)
        return doc, False
