"""The (i,j)-compression, shiftedness testing, the weight functional, and
simultaneous fixpoint shifting of cross-intersecting pairs."""

from __future__ import annotations

from dataclasses import dataclass

from .family import Family, are_cross_intersecting, is_non_trivial
from .kset import KSet


@dataclass(frozen=True)
class ShiftTrace:
    """Log of one fixpoint run: every (i, j) step that moved at least one
    set, with the count moved across both families."""

    applied: tuple[tuple[int, int, int], ...]
    initial_w: int
    final_w: int
    lost_nontriviality: bool


def shift_ij(f: Family, i: int, j: int) -> Family:
    """Replace j by i in every member containing j but not i, unless the
    replacement is already present.  Preserves |f|."""
    g = f.ground
    if i >= j:
        raise ValueError(f"shift requires i < j, got ({i}, {j})")
    if i < g.lo or j > g.n:
        raise ValueError(f"({i}, {j}) outside ground [{g.lo}, {g.n}]")
    bi, bj = 1 << (i - 1), 1 << (j - 1)
    present = f.mask_set
    out = []
    for m in f.members:
        if m.mask & bj and not m.mask & bi:
            target = (m.mask ^ bj) | bi
            out.append(m if target in present else KSet(target, g))
        else:
            out.append(m)
    return Family(g, tuple(sorted(out, key=lambda ks: ks.elements)))


def is_shifted(f: Family) -> bool:
    """True iff f is a downset of the coordinatewise order.  Checked via
    single-element decrements a -> a-1, whose closure is equivalent to the
    full downset condition."""
    lo = f.ground.lo
    present = f.mask_set
    for m in f.members:
        for a in m.elements:
            if a <= lo:
                continue
            below = 1 << (a - 2)
            if not m.mask & below:
                if ((m.mask ^ (1 << (a - 1))) | below) not in present:
                    return False
    return True


def set_weight(m: KSet) -> int:
    return sum(m.elements)


def weight_pair(f: Family, g: Family) -> int:
    """Sum of all elements over all members of both families."""
    return sum(set_weight(m) for m in f.members) + sum(set_weight(m) for m in g.members)


def shift_pair_to_fixpoint(f: Family, g: Family) -> tuple[Family, Family, ShiftTrace]:
    """Apply the same (i, j) compression to both families, sweeping
    j = lo+1..n and i = lo..j-1, repeating until a full sweep moves
    nothing.  Simultaneous application keeps the pair cross-intersecting;
    non-triviality may be lost and the trace records whether it was."""
    if not are_cross_intersecting(f, g):
        raise ValueError("input pair is not cross-intersecting")
    if f.ground.n != g.ground.n or f.ground.lo != g.ground.lo:
        raise ValueError("fixpoint shifting expects matching ground intervals")
    lo, n = f.ground.lo, f.ground.n
    initial_w = weight_pair(f, g)
    nt_f, nt_g = is_non_trivial(f), is_non_trivial(g)
    lost = False
    applied: list[tuple[int, int, int]] = []
    while True:
        moved_this_sweep = False
        for j in range(lo + 1, n + 1):
            for i in range(lo, j):
                f2 = shift_ij(f, i, j)
                g2 = shift_ij(g, i, j)
                moved = len(f.mask_set - f2.mask_set) + len(g.mask_set - g2.mask_set)
                if not moved:
                    continue
                moved_this_sweep = True
                applied.append((i, j, moved))
                f, g = f2, g2
                new_nt_f, new_nt_g = is_non_trivial(f), is_non_trivial(g)
                if (nt_f and not new_nt_f) or (nt_g and not new_nt_g):
                    lost = True
                nt_f, nt_g = new_nt_f, new_nt_g
        if not moved_this_sweep:
            break
    trace = ShiftTrace(tuple(applied), initial_w, weight_pair(f, g), lost)
    return f, g, trace


def trace_to_doc(t: ShiftTrace) -> dict:
    return {
        "schema": "trace/1",
        "applied": [list(step) for step in t.applied],
        "initial_w": t.initial_w,
        "final_w": t.final_w,
        "lost_nontriviality": t.lost_nontriviality,
    }


def trace_from_doc(doc: dict) -> ShiftTrace:
    if doc.get("schema") != "trace/1":
        raise ValueError(f"not a trace/1 document: {doc.get('schema')!r}")
    return ShiftTrace(
        applied=tuple((a, b, c) for a, b, c in doc["applied"]),
        initial_w=doc["initial_w"],
        final_w=doc["final_w"],
        lost_nontriviality=doc["lost_nontriviality"],
    )
