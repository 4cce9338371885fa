"""Command-line frontend.

Exit codes: 0 success (certificate holds / search optimum matches the
conjectured square / zero trial violations), 1 a checked property failed,
2 usage or parameter error, 3 search budget exhausted before optimality.
All machine output is canonical JSON; CSV is a lossy projection offered
for certificate record grids only.
"""

from __future__ import annotations

import argparse
import csv
import sys
from typing import Sequence

from ._doc import canonical_dumps, write_doc
from .certify import (
    Certificate,
    CertRecord,
    OUTSIDE_RANGE,
    appendix_threshold_scan,
    certificate_to_doc,
    certify_grid,
    check_key,
    check_key1,
    check_key2,
    check_ratio_3k,
    check_ratio_bound,
)
from .exactmath import binom, hm_size
from .family import (
    example1_pair,
    family_to_doc,
    hm_family,
    is_intersecting,
    is_non_trivial,
    mixed_uniformity_pair,
    pair_stats,
    write_family,
)
from .search import (
    brute_oracle,
    cached_report,
    fk_diversity_trial,
    hilton_trial,
    max_product_search,
    prop21_diagnostic,
    prop21_report_to_doc,
    search_report_to_doc,
    size_sum_trial,
    star_split_trial,
    trial_report_to_doc,
)

_ORACLE_CAP = 21
_DEFAULT_SEED = 42

# CLI spelling -> internal lemma id
_LEMMAS = {
    "key": "key",
    "key1": "key1",
    "key2": "key2",
    "ratio": "ratio_bound",
    "ratio3k": "ratio_3k",
    "fmono": "f_mono",
    "pow57": "pow57_threshold",
}

_POINT_CHECKS = {
    "key": check_key,
    "key1": check_key1,
    "key2": check_key2,
}


class UsageError(Exception):
    pass


def _parse_k_range(text: str) -> tuple[int, int]:
    """Accept '8' or '8..23'."""
    lo, sep, hi = text.partition("..")
    try:
        k_lo = int(lo)
        k_hi = int(hi) if sep else k_lo
    except ValueError:
        raise UsageError(f"bad k range {text!r}, expected N or N..M") from None
    if k_lo < 1 or k_hi < k_lo:
        raise UsageError(f"bad k range {text!r}")
    return k_lo, k_hi


def _parse_elements(text: str, name: str) -> tuple[int, ...]:
    try:
        elems = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise UsageError(f"bad {name} {text!r}, expected comma-separated integers") from None
    if not elems:
        raise UsageError(f"{name} must be non-empty")
    return elems


def _emit(doc: dict, args: argparse.Namespace, human: Sequence[str]) -> None:
    """Write --out if requested; print per --format."""
    if getattr(args, "out", None):
        write_doc(args.out, doc)
    if args.format == "json":
        print(canonical_dumps(doc))
    else:
        for line in human:
            print(line)


def _emit_csv_records(records: Sequence[CertRecord]) -> None:
    w = csv.writer(sys.stdout)
    w.writerow(["lemma_id", "n", "k", "t", "lhs", "rhs", "holds", "flags"])
    for r in records:
        w.writerow([r.lemma_id, r.n, r.k, "" if r.t is None else r.t,
                    r.lhs, r.rhs, r.holds, ";".join(r.flags)])


def cmd_certify(args: argparse.Namespace) -> int:
    lemma_id = _LEMMAS[args.lemma]
    k_lo, k_hi = _parse_k_range(args.k)
    strict = args.strict_paper_ranges
    t = args.t
    if lemma_id == "ratio_bound":
        t = 3 if t is None else t
    elif t is not None:
        raise UsageError("--t applies only to --lemma ratio")

    if args.n is not None:
        if lemma_id in ("f_mono", "pow57_threshold"):
            raise UsageError(f"--n does not apply to --lemma {args.lemma}")
        records = []
        for k in range(k_lo, k_hi + 1):
            if lemma_id == "ratio_bound":
                records.append(check_ratio_bound(args.n, k, t, strict=strict))
            elif lemma_id == "ratio_3k":
                records.append(check_ratio_3k(args.n, k))
            else:
                records.append(_POINT_CHECKS[args.lemma](args.n, k, strict=strict))
        if strict and any(OUTSIDE_RANGE in r.flags for r in records):
            raise UsageError(f"n={args.n} outside the certified range for {args.lemma}")
        params = {"k_lo": k_lo, "k_hi": k_hi, "n": args.n}
        if t is not None:
            params["t"] = t
        cert = Certificate(lemma_id, params, tuple(records), all(r.holds for r in records))
    else:
        cert = certify_grid(lemma_id, k_lo, k_hi, t)

    doc = certificate_to_doc(cert)
    if args.out:
        write_doc(args.out, doc)
    if args.format == "csv":
        _emit_csv_records(cert.records)
    elif args.format == "json":
        print(canonical_dumps(doc))
    else:
        failing = sum(1 for r in cert.records if not r.holds)
        print(
            f"lemma={args.lemma} k={k_lo}..{k_hi} records={len(cert.records)} "
            f"failing={failing} all_hold={cert.all_hold}"
        )
    return 0 if cert.all_hold else 1


def cmd_hm(args: argparse.Namespace) -> int:
    fam = hm_family(args.n, args.k)
    expected = hm_size(args.n, args.k)
    inter = is_intersecting(fam)
    nont = is_non_trivial(fam)
    doc = family_to_doc(fam)
    _emit(
        doc,
        args,
        [
            f"n={args.n} k={args.k} size={len(fam)} expected={expected} "
            f"intersecting={inter} non_trivial={nont}"
        ],
    )
    return 0 if (len(fam) == expected and inter and nont) else 1


def _emit_pair(args: argparse.Namespace, kind: str, f, g, extra: dict) -> int:
    stats = pair_stats(f, g)
    doc = {
        "schema": "report/1",
        "kind": kind,
        "size_f": stats.size_f,
        "size_g": stats.size_g,
        "product": stats.product,
        "cross_intersecting": stats.ci,
        "non_trivial_f": stats.nontrivial_f,
        "non_trivial_g": stats.nontrivial_g,
        **extra,
        "f": family_to_doc(f),
        "g": family_to_doc(g),
    }
    if args.out:
        write_family(f"{args.out}.f.json", f)
        write_family(f"{args.out}.g.json", g)
    if args.format == "json":
        print(canonical_dumps(doc))
    else:
        print(
            f"size_f={stats.size_f} size_g={stats.size_g} product={stats.product} "
            f"cross_intersecting={stats.ci} non_trivial_f={stats.nontrivial_f} "
            f"non_trivial_g={stats.nontrivial_g}"
            + "".join(f" {k}={v}" for k, v in extra.items())
        )
    ok = stats.ci and stats.nontrivial_f and stats.nontrivial_g
    for v in extra.values():
        if isinstance(v, bool):
            ok = ok and v
    return 0 if ok else 1


def cmd_example1(args: argparse.Namespace) -> int:
    f0 = _parse_elements(args.f0, "--f0")
    g0 = _parse_elements(args.g0, "--g0")
    f, g = example1_pair(args.n, args.k, f0, g0)
    h = hm_size(args.n, args.k)
    return _emit_pair(
        args,
        "example1",
        f,
        g,
        {"hm_sizes": len(f) == h and len(g) == h, "hm_square": h * h},
    )


def cmd_mixed(args: argparse.Namespace) -> int:
    f0 = _parse_elements(args.f0, "--f0")
    g0 = _parse_elements(args.g0, "--g0")
    f, g = mixed_uniformity_pair(args.n, args.k, args.l, f0, g0)
    return _emit_pair(args, "mixed", f, g, {"l": args.l})


def cmd_search(args: argparse.Namespace) -> int:
    mode = args.mode
    if mode == "auto":
        mode = "oracle" if binom(args.n, args.k) <= _ORACLE_CAP else "bb"

    def compute() -> dict:
        if mode == "oracle":
            return search_report_to_doc(brute_oracle(args.n, args.k))
        return search_report_to_doc(max_product_search(args.n, args.k, args.budget))

    if args.no_cache or (mode == "bb" and args.budget is not None):
        doc, cached = compute(), False
    else:
        doc, cached = cached_report(args.n, args.k, mode, compute)

    if args.out:
        write_doc(args.out, doc)
    if args.format == "json":
        print(canonical_dumps(doc))
    else:
        print(
            f"n={args.n} k={args.k} mode={mode} cached={cached} "
            f"best_product={doc['best_product']} optimal={doc['optimal']} "
            f"hm_square={doc['hm_square']} matches_conjecture={doc['matches_conjecture']} "
            f"nodes={doc['nodes_explored']}"
        )
    if doc["budget_exhausted"]:
        return 3
    if doc["hm_square"] is not None and doc["best_product"] != doc["hm_square"]:
        return 1
    return 0


def cmd_trials(args: argparse.Namespace) -> int:
    if args.prop == "prop21":
        diag = prop21_diagnostic(args.n, args.k)
        doc = prop21_report_to_doc(diag)
        human = [
            f"prop=prop21 n={args.n} k={args.k} optima={diag['optima_count']} "
            f"best_product={diag['best_product']} violations={diag['violations']} "
            f"unexplained={len(diag['apparent_violations'])}"
        ]
        _emit(doc, args, human)
        return 0 if diag["violations"] == 0 else 1

    if args.prop == "hilton":
        rep = hilton_trial(args.n, args.k, args.trials, args.seed)
    elif args.prop == "starsplit":
        rep = star_split_trial(args.n, args.k, args.trials, args.seed)
    elif args.prop == "fk":
        rep = fk_diversity_trial(args.n, args.k, args.u, args.trials, args.seed)
    else:
        rep = size_sum_trial(args.n, args.k, args.trials, args.seed)
    doc = trial_report_to_doc(rep)
    human = [
        f"prop={rep.property_id} n={rep.n} k={rep.k} trials={rep.trials} seed={rep.seed} "
        f"hypothesis_hits={rep.hypothesis_hits} violations={rep.violations} "
        f"vacuous={rep.vacuous}"
    ]
    _emit(doc, args, human)
    return 0 if rep.violations == 0 else 1


def cmd_appendix_scan(args: argparse.Namespace) -> int:
    scan = appendix_threshold_scan(args.max_k)
    doc = {"schema": "report/1", "kind": "appendix_scan", **scan}
    human = [
        f"pow57 min_k={scan['pow57']['min_k']} "
        f"matches_reference={scan['pow57']['matches_reference']}",
        f"f_below_one min_k={scan['f_below_one']['min_k']} "
        f"value={scan['f_below_one']['value_at_min']} "
        f"matches_reference={scan['f_below_one']['matches_reference']}",
        f"f_monotone {scan['f_monotone']['from_k']}..{scan['f_monotone']['to_k']} "
        f"all_decreasing={scan['f_monotone']['all_decreasing']}",
    ]
    _emit(doc, args, human)
    return 0


def _add_common(p: argparse.ArgumentParser, formats: tuple[str, ...]) -> None:
    p.add_argument("--out", help="write the canonical JSON document to this path")
    p.add_argument("--format", choices=formats, default=formats[0])


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="crossint",
        description="Exact certificates, extremal constructions, and searches "
        "for cross-intersecting set families.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", help="certify an inequality over its (n, k) grid")
    p.add_argument("--lemma", choices=sorted(_LEMMAS), required=True)
    p.add_argument("--k", required=True, help="k or k_lo..k_hi, e.g. 8..23")
    p.add_argument("--t", type=int, help="ratio lemma parameter (default 3)")
    p.add_argument("--n", type=int, help="restrict to a single n instead of the grid")
    p.add_argument(
        "--strict-paper-ranges",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="reject parameters outside the certified range (default on)",
    )
    _add_common(p, ("json", "csv", "human"))
    p.set_defaults(fn=cmd_certify)

    p = sub.add_parser("hm", help="construct the extremal single-family example")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    _add_common(p, ("human", "json"))
    p.set_defaults(fn=cmd_hm)

    p = sub.add_parser("example1", help="construct the two-family equality pair")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--f0", required=True, help="comma-separated elements, e.g. 2,3,4")
    p.add_argument("--g0", required=True, help="comma-separated elements, e.g. 4,5,6")
    _add_common(p, ("human", "json"))
    p.set_defaults(fn=cmd_example1)

    p = sub.add_parser("mixed", help="construct the mixed-uniformity pair")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--f0", required=True)
    p.add_argument("--g0", required=True)
    _add_common(p, ("human", "json"))
    p.set_defaults(fn=cmd_mixed)

    p = sub.add_parser("search", help="max |F|*|G| over non-trivial cross-intersecting pairs")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--budget", type=float, help="wall-clock seconds before giving up")
    p.add_argument("--mode", choices=("auto", "oracle", "bb"), default="auto")
    p.add_argument("--no-cache", action="store_true", help="bypass the results cache")
    _add_common(p, ("json", "human"))
    p.set_defaults(fn=cmd_search)

    p = sub.add_parser("trials", help="seeded randomized property drivers")
    p.add_argument(
        "--prop", choices=("hilton", "starsplit", "fk", "sizesum", "prop21"), required=True
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--u", type=int, default=3, help="diversity property parameter")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=_DEFAULT_SEED)
    _add_common(p, ("json", "human"))
    p.set_defaults(fn=cmd_trials)

    p = sub.add_parser("appendix-scan", help="exact threshold scans for the decay bounds")
    p.add_argument("--max-k", type=int, default=200)
    _add_common(p, ("json", "human"))
    p.set_defaults(fn=cmd_appendix_scan)

    return top


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
