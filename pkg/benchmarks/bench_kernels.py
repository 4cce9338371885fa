"""Backend benchmark for the three bitmask kernels.

Times the subset-sweep oracle, the all-pairs intersection check, and the
branch-and-bound search on each available backend (numba JIT, vectorized
numpy, plain python), with a JIT warm-up excluded from timing.  Results
are cross-checked for equality before any timing is reported.

Run:

    python benchmarks/bench_kernels.py
"""

import statistics
import time

import numpy as np

from crossint._kernels import HAVE_NUMBA, oracle_products, pairs_all_intersect, set_backend
from crossint.exactmath import binom
from crossint.family import all_ksets, hm_family
from crossint.search import _kills, _not_elem, max_product_search

REPEATS = 5

# (label, backends to run, callable returning a comparable result)
def make_tasks():
    n_oracle, k_oracle = 7, 2
    masks = all_ksets(n_oracle, k_oracle).masks
    kills = _kills(masks)
    ne = _not_elem(masks, n_oracle)
    m = binom(n_oracle, k_oracle)

    hm = hm_family(15, 7)

    def oracle_task():
        return int(oracle_products(kills, ne, m).max())

    def pairs_task():
        return pairs_all_intersect(hm.masks, hm.masks)

    def bb_task():
        rep = max_product_search(6, 3)
        return (rep.best_product, rep.nodes_explored)

    return [
        (f"oracle 2^{m} subsets ({n_oracle},{k_oracle})", ("numba", "numpy", "python"), oracle_task),
        (f"pairwise CI, {len(hm)}^2 pairs", ("numba", "numpy", "python"), pairs_task),
        ("branch&bound (6,3)", ("numba", "python"), bb_task),
    ]


def time_backend(task, backend, repeats=REPEATS):
    set_backend(backend)
    result = task()  # warm-up; compiles on the numba path
    durations = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = task()
        durations.append(time.perf_counter() - t0)
        assert out == result, f"nondeterministic result on {backend}"
    set_backend(None)
    return result, statistics.mean(durations), statistics.pstdev(durations)


def main():
    if not HAVE_NUMBA:
        print("[Info] numba not importable; JIT column will be skipped.")
    print(f"{'Task':34s} {'Backend':8s} {'Mean(s)':>10s} {'Std(s)':>9s} {'vs python':>10s}")
    print("-" * 76)
    for label, backends, task in make_tasks():
        rows = []
        expected = None
        for be in backends:
            if be == "numba" and not HAVE_NUMBA:
                continue
            result, mean, std = time_backend(task, be)
            if expected is None:
                expected = result
            assert result == expected, f"{label}: {be} disagrees with {backends[0]}"
            rows.append((be, mean, std))
        base = next(mean for be, mean, _ in rows if be == "python")
        for be, mean, std in rows:
            speed = f"{base / mean:8.1f}x" if mean > 0 else "     inf"
            print(f"{label:34s} {be:8s} {mean:10.5f} {std:9.5f} {speed:>10s}")
        print(f"{'':34s} result agreed across backends: {expected}")
    print("\nDone.")


if __name__ == "__main__":
    main()
