"""Exact rational simplex for packing LPs.

Solves ``max c.x  s.t.  A x <= b, 0 <= x <= u`` where ``A >= 0``. With a
non-negative matrix the origin is feasible whenever ``b >= 0``, so no phase 1
is needed; a negative ``b`` entry means the LP is infeasible. Bland's rule
keeps degenerate pivots from cycling.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from collections.abc import Sequence


@dataclass(frozen=True)
class LPResult:
    feasible: bool
    x: tuple[Fraction, ...] = ()
    value: Fraction = Fraction(0)
    pivots: int = 0


def solve_packing_lp(
    c: Sequence[Fraction],
    a: Sequence[Sequence[Fraction]],
    b: Sequence[Fraction],
    upper: Sequence[Fraction],
) -> LPResult:
    n = len(c)
    if any(v < 0 for row in a for v in row):
        raise ValueError("packing LP needs a non-negative constraint matrix")
    if any(v < 0 for v in b) or any(u < 0 for u in upper):
        return LPResult(False)

    # bound rows x_j <= u_j appended after the structural rows
    rows = [list(map(Fraction, row)) for row in a]
    rhs = [Fraction(v) for v in b]
    for j in range(n):
        unit = [Fraction(0)] * n
        unit[j] = Fraction(1)
        rows.append(unit)
        rhs.append(Fraction(upper[j]))
    m = len(rows)

    width = n + m
    tab = []
    for i, row in enumerate(rows):
        slack = [Fraction(0)] * m
        slack[i] = Fraction(1)
        tab.append(row + slack + [rhs[i]])
    basis = [n + i for i in range(m)]
    reduced = [Fraction(v) for v in c] + [Fraction(0)] * m
    value = Fraction(0)

    pivots = 0
    while True:
        enter = next((j for j in range(width) if reduced[j] > 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            coef = tab[i][enter]
            if coef > 0:
                ratio = tab[i][-1] / coef
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        # bound rows make every column bounded
        assert leave is not None
        pivot_row = tab[leave]
        pv = pivot_row[enter]
        if pv != 1:
            pivot_row = [v / pv for v in pivot_row]
            tab[leave] = pivot_row
        for i in range(m):
            if i != leave:
                f = tab[i][enter]
                if f:
                    tab[i] = [v - f * p for v, p in zip(tab[i], pivot_row)]
        f = reduced[enter]
        reduced = [r - f * p for r, p in zip(reduced, pivot_row[:-1])]
        value += f * pivot_row[-1]
        basis[leave] = enter
        pivots += 1

    x = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = tab[i][-1]
    return LPResult(True, tuple(x), value, pivots)
