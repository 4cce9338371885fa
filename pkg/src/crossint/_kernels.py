"""Hot bitmask loops with selectable backends.

Three interchangeable implementations of the same contracts:

- "numba": JIT loops with early exit (default when numba imports).
- "numpy": chunked vectorized array passes.
- "python": plain-int reference loops, also the only path for branch
  and bound instances wider than 64 candidate sets.

Select with CROSSINT_KERNELS=numba|numpy|python or `set_backend`.
All backends must return identical results; the test suite enforces it.
"""

from __future__ import annotations

import os
from typing import Iterable, Sequence

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba present in the supported env
    HAVE_NUMBA = False

    def njit(*args, **kwargs):  # type: ignore[misc]
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


_VALID = ("numba", "numpy", "python")
_override: str | None = None


def set_backend(name: str | None) -> None:
    """Force a backend for this process (tests, benchmarks); None restores
    the environment-driven choice."""
    global _override
    if name is not None and name not in _VALID:
        raise ValueError(f"unknown backend {name!r}, expected one of {_VALID}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not importable")
    _override = name


def backend() -> str:
    if _override is not None:
        return _override
    env = os.environ.get("CROSSINT_KERNELS", "").strip().lower()
    if env:
        if env not in _VALID:
            raise ValueError(f"CROSSINT_KERNELS={env!r} not in {_VALID}")
        if env == "numba" and not HAVE_NUMBA:
            raise RuntimeError("CROSSINT_KERNELS=numba but numba is not importable")
        return env
    return "numba" if HAVE_NUMBA else "numpy"


def as_u64(masks: Iterable[int]) -> np.ndarray:
    return np.fromiter((np.uint64(m) for m in masks), dtype=np.uint64)


U0 = np.uint64(0)
U1 = np.uint64(1)
_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)
_S1 = np.uint64(1)
_S2 = np.uint64(2)
_S4 = np.uint64(4)
_S56 = np.uint64(56)


if HAVE_NUMBA:

    @njit(cache=True, inline="always")
    def _pc64(x):
        x = x - ((x >> _S1) & _M1)
        x = (x & _M2) + ((x >> _S2) & _M2)
        x = (x + (x >> _S4)) & _M4
        return (x * _H01) >> _S56

    @njit(cache=True)
    def _meets_all_numba(cands, members):
        out = np.empty(cands.shape[0], dtype=np.bool_)
        for i in range(cands.shape[0]):
            c = cands[i]
            ok = True
            for j in range(members.shape[0]):
                if c & members[j] == U0:
                    ok = False
                    break
            out[i] = ok
        return out

    @njit(cache=True)
    def _pairs_all_intersect_numba(a, b):
        for i in range(a.shape[0]):
            x = a[i]
            for j in range(b.shape[0]):
                if x & b[j] == U0:
                    return False
        return True

    @njit(cache=True)
    def _oracle_products_numba(kills, not_elem, m):
        size = 1 << m
        full = size - 1
        ku = np.zeros(size, dtype=np.int32)
        products = np.zeros(size, dtype=np.uint16)
        n_elem = not_elem.shape[0]
        for s in range(1, size):
            low = s & (-s)
            i = 0
            t = low >> 1
            while t:
                t >>= 1
                i += 1
            ku[s] = ku[s ^ low] | kills[i]
            g = full & ~np.int64(ku[s])
            if g == 0:
                continue
            valid = True
            for e in range(n_elem):
                if s & not_elem[e] == 0 or g & not_elem[e] == 0:
                    valid = False
                    break
            if not valid:
                continue
            pf = 0
            t = s
            while t:
                t &= t - 1
                pf += 1
            pg = 0
            t = g
            while t:
                t &= t - 1
                pg += 1
            products[s] = np.uint16(pf * pg)
        return products

    @njit(cache=True)
    def _bb_slice_numba(
        kills,
        set_masks,
        full_elem,
        st_i,
        st_s,
        st_alive,
        st_cf,
        st_cm,
        top,
        best,
        best_s,
        node_limit,
        m,
    ):
        nodes = 0
        while top > 0 and nodes < node_limit:
            top -= 1
            nodes += 1
            i = st_i[top]
            s = st_s[top]
            alive = st_alive[top]
            cf = st_cf[top]
            common = st_cm[top]
            # chain includes that cannot shrink the transversal; taking such
            # a set dominates skipping it
            while i < m and kills[i] & alive == U0:
                s |= U1 << np.uint64(i)
                common &= set_masks[i]
                cf += 1
                i += 1
            pa = np.int64(_pc64(alive))
            if i >= m:
                prod = cf * pa
                if prod > best and cf > 0 and alive != U0 and common == U0:
                    gcm = full_elem
                    t = alive
                    while t != U0:
                        low = t & (U0 - t)
                        j = 0
                        u = low >> _S1
                        while u != U0:
                            u >>= _S1
                            j += 1
                        gcm &= set_masks[j]
                        if gcm == U0:
                            break
                        t ^= low
                    if gcm == U0:
                        best = prod
                        best_s = s
                continue
            if (cf + (m - i)) * pa <= best:
                continue
            st_i[top] = i + 1
            st_s[top] = s
            st_alive[top] = alive
            st_cf[top] = cf
            st_cm[top] = common
            top += 1
            st_i[top] = i + 1
            st_s[top] = s | (U1 << np.uint64(i))
            st_alive[top] = alive & ~kills[i]
            st_cf[top] = cf + 1
            st_cm[top] = common & set_masks[i]
            top += 1
        return top, best, best_s, nodes


def _popcount_array(arr: np.ndarray) -> np.ndarray:
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(arr).astype(np.int64)
    v = arr.astype(np.uint64)
    v = v - ((v >> np.uint64(1)) & _M1)
    v = (v & _M2) + ((v >> np.uint64(2)) & _M2)
    v = (v + (v >> np.uint64(4))) & _M4
    return ((v * _H01) >> np.uint64(56)).astype(np.int64)


def _meets_all_numpy(cands: np.ndarray, members: np.ndarray) -> np.ndarray:
    if members.shape[0] == 0:
        return np.ones(cands.shape[0], dtype=bool)
    out = np.empty(cands.shape[0], dtype=bool)
    chunk = max(1, 4_000_000 // members.shape[0])
    for start in range(0, cands.shape[0], chunk):
        blk = cands[start : start + chunk, None] & members[None, :]
        out[start : start + chunk] = (blk != 0).all(axis=1)
    return out


def _oracle_products_numpy(kills: np.ndarray, not_elem: np.ndarray, m: int) -> np.ndarray:
    size = 1 << m
    ku = np.zeros(size, dtype=np.int32)
    for i in range(m):
        half = 1 << i
        view = ku.reshape(-1, 2 * half)
        view[:, half:] = view[:, :half] | kills[i]
    full = np.int32(size - 1)
    g = full & ~ku
    s_arr = np.arange(size, dtype=np.int32)
    trivial = np.zeros(size, dtype=bool)
    for neb in not_elem:
        trivial |= (s_arr & neb) == 0
        trivial |= (g & neb) == 0
    prods = _popcount_array(s_arr) * _popcount_array(g)
    prods[trivial] = 0
    return prods.astype(np.uint16)


def _oracle_products_python(kills: Sequence[int], not_elem: Sequence[int], m: int) -> np.ndarray:
    size = 1 << m
    full = size - 1
    ku = [0] * size
    products = np.zeros(size, dtype=np.uint16)
    for s in range(1, size):
        low = s & -s
        ku[s] = ku[s ^ low] | kills[low.bit_length() - 1]
        g = full & ~ku[s]
        if g == 0:
            continue
        if any(s & ne == 0 or g & ne == 0 for ne in not_elem):
            continue
        products[s] = s.bit_count() * g.bit_count()
    return products


def meets_all(cand_masks: Sequence[int], member_masks: Sequence[int]) -> np.ndarray:
    """Boolean vector: cand_masks[i] intersects every member mask."""
    which = backend()
    if which == "python":
        return np.array([all(c & m for m in member_masks) for c in cand_masks], dtype=bool)
    cands = as_u64(cand_masks)
    members = as_u64(member_masks)
    if which == "numba":
        return _meets_all_numba(cands, members)
    return _meets_all_numpy(cands, members)


def pairs_all_intersect(a_masks: Sequence[int], b_masks: Sequence[int]) -> bool:
    """True iff every mask of a intersects every mask of b."""
    which = backend()
    if which == "python":
        return all(x & y for x in a_masks for y in b_masks)
    a = as_u64(a_masks)
    b = as_u64(b_masks)
    if which == "numba":
        return bool(_pairs_all_intersect_numba(a, b))
    if a.shape[0] == 0 or b.shape[0] == 0:
        return True
    return bool(_meets_all_numpy(a, b).all())


def oracle_products(kills: Sequence[int], not_elem: Sequence[int], m: int) -> np.ndarray:
    """For every subset s of the m candidate sets: |F_s| * |T(F_s)| when both
    F_s and its transversal are non-trivial, else 0.

    kills[i]: bitmask over candidates disjoint from candidate i.
    not_elem[e]: bitmask over candidates not containing element e.
    """
    if m > 21:
        raise ValueError(f"oracle limited to 21 candidate sets, got {m}")
    which = backend()
    if which == "python":
        return _oracle_products_python(list(kills), list(not_elem), m)
    kills_arr = np.asarray(list(kills), dtype=np.int32)
    ne_arr = np.asarray(list(not_elem), dtype=np.int32)
    if which == "numba":
        return _oracle_products_numba(
            kills_arr.astype(np.int64), ne_arr.astype(np.int64), m
        )
    return _oracle_products_numpy(kills_arr, ne_arr, m)


class BBState:
    """Restartable depth-first branch and bound over candidate-set masks.

    Masks are over candidate indices (m bits) except `common`, which tracks
    the running intersection of the chosen sets' elements.  `run_slice`
    processes a bounded number of nodes so a driver can enforce wall-clock
    budgets between slices.
    """

    def __init__(
        self,
        kills: Sequence[int],
        set_masks: Sequence[int],
        full_elem: int,
        seed_best: int,
    ) -> None:
        self.m = len(kills)
        self.kills = list(kills)
        self.set_masks = list(set_masks)
        self.full_elem = full_elem
        self.best = seed_best
        self.best_s = 0
        self.nodes = 0
        full_alive = (1 << self.m) - 1
        self.stack: list[tuple[int, int, int, int, int]] = [(0, 0, full_alive, 0, full_elem)]
        self._use_numba = backend() == "numba" and self.m <= 64
        if self._use_numba:
            cap = 2 * self.m + 16
            self._st_i = np.zeros(cap, dtype=np.int64)
            self._st_s = np.zeros(cap, dtype=np.uint64)
            self._st_alive = np.zeros(cap, dtype=np.uint64)
            self._st_cf = np.zeros(cap, dtype=np.int64)
            self._st_cm = np.zeros(cap, dtype=np.uint64)
            self._st_i[0] = 0
            self._st_s[0] = 0
            self._st_alive[0] = np.uint64(full_alive)
            self._st_cf[0] = 0
            self._st_cm[0] = np.uint64(full_elem)
            self._top = 1
            self._kills_u = as_u64(self.kills)
            self._masks_u = as_u64(self.set_masks)

    @property
    def done(self) -> bool:
        if self._use_numba:
            return self._top == 0
        return not self.stack

    def run_slice(self, node_limit: int) -> None:
        if self._use_numba:
            top, best, best_s, nodes = _bb_slice_numba(
                self._kills_u,
                self._masks_u,
                np.uint64(self.full_elem),
                self._st_i,
                self._st_s,
                self._st_alive,
                self._st_cf,
                self._st_cm,
                self._top,
                self.best,
                np.uint64(self.best_s),
                node_limit,
                self.m,
            )
            self._top = int(top)
            self.best = int(best)
            self.best_s = int(best_s)
            self.nodes += int(nodes)
            return
        self._run_slice_python(node_limit)

    def _run_slice_python(self, node_limit: int) -> None:
        kills = self.kills
        set_masks = self.set_masks
        m = self.m
        best = self.best
        best_s = self.best_s
        stack = self.stack
        nodes = 0
        while stack and nodes < node_limit:
            i, s, alive, cf, common = stack.pop()
            nodes += 1
            while i < m and kills[i] & alive == 0:
                s |= 1 << i
                common &= set_masks[i]
                cf += 1
                i += 1
            pa = alive.bit_count()
            if i >= m:
                prod = cf * pa
                if prod > best and cf > 0 and alive and common == 0:
                    gcm = self.full_elem
                    t = alive
                    while t:
                        low = t & -t
                        gcm &= set_masks[low.bit_length() - 1]
                        if gcm == 0:
                            break
                        t ^= low
                    if gcm == 0:
                        best = prod
                        best_s = s
                continue
            if (cf + (m - i)) * pa <= best:
                continue
            stack.append((i + 1, s, alive, cf, common))
            stack.append((i + 1, s | (1 << i), alive & ~kills[i], cf + 1, common & set_masks[i]))
        self.best = best
        self.best_s = best_s
        self.nodes += nodes
