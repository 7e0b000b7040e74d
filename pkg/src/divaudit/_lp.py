"""Exact phase-one simplex for small feasibility problems ``A x = b, x >= 0``."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence


def feasible_point(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """Return some x >= 0 with A x = b, or None when the system is infeasible.

    Dense tableau, one artificial variable per row, Bland's rule (no cycling).
    Redundant equality rows are harmless: their artificial stays basic at 0.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    rows = []
    for a_row, bi in zip(A, b):
        a_row = [Fraction(a) for a in a_row]
        bi = Fraction(bi)
        if bi < 0:
            a_row, bi = [-a for a in a_row], -bi
        rows.append(a_row + [Fraction(int(i == len(rows))) for i in range(m)] + [bi])
    basis = [n + i for i in range(m)]
    width = n + m + 1
    # reduced costs of phase one (minimise the sum of artificials)
    cost = [Fraction(0)] * width
    for j in range(n):
        cost[j] = -sum(r[j] for r in rows)
    cost[-1] = -sum(r[-1] for r in rows)

    while True:
        enter = next((j for j in range(n + m) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        for i, r in enumerate(rows):
            a = r[enter]
            if a > 0:
                ratio = r[-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:  # unbounded direction; cannot happen in phase one
            break
        _, piv = best
        prow = rows[piv]
        inv = 1 / prow[enter]
        prow = [v * inv for v in prow]
        rows[piv] = prow
        nz = [j for j, v in enumerate(prow) if v]
        for i, r in enumerate(rows):
            if i != piv and r[enter]:
                f = r[enter]
                for j in nz:
                    r[j] -= f * prow[j]
        f = cost[enter]
        for j in nz:
            cost[j] -= f * prow[j]
        basis[piv] = enter

    if any(basis[i] >= n and rows[i][-1] != 0 for i in range(m)):
        return None
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = rows[i][-1]
    return x
