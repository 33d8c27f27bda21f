"""Depth-first branch and bound over exact LP relaxations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from ..model import BundlingPlan
from .constraints import ConstraintSet
from .lp import solve_packing_lp


class SolveStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class SolveReport:
    plan: BundlingPlan | None
    objective: int
    status: SolveStatus
    nodes_explored: int
    lp_bound: Fraction | None

    @property
    def optimal(self) -> bool:
        return self.status is SolveStatus.OPTIMAL


def tie_break_weights(cs: ConstraintSet) -> list[int]:
    """Objective weights that rank plans by total, then lexicographically.

    With radix ``r`` covering every variable's range, a unit of total always
    outweighs any lexicographic difference, and among equal totals larger
    values at lower node ids win.
    """
    n = len(cs.nodes)
    r = max((hi - lo for lo, hi in zip(cs.lower, cs.upper)), default=0) + 1
    return [r**n + r ** (n - 1 - j) for j in range(n)]


def _matrix(cs: ConstraintSet) -> list[list[Fraction]]:
    a = []
    for row in cs.rows:
        line = [Fraction(0)] * len(cs.nodes)
        for node, coef in row.coefs:
            line[cs.index(node)] += coef
        a.append(line)
    return a


def _relax(c, a, rhs, lo, hi):
    shifted = [b - sum(aij * l for aij, l in zip(row, lo)) for row, b in zip(a, rhs)]
    upper = [h - l for l, h in zip(lo, hi)]
    res = solve_packing_lp(c, a, shifted, upper)
    if not res.feasible:
        return None, None
    gamma = [l + x for l, x in zip(lo, res.x)]
    return gamma, res.value + sum(ci * l for ci, l in zip(c, lo))


def lp_relaxation_bound(cs: ConstraintSet) -> Fraction | None:
    """Root LP optimum of the plain total, or None when the LP is infeasible."""
    a = _matrix(cs)
    _, value = _relax([1] * len(cs.nodes), a, [r.rhs for r in cs.rows], cs.lower, cs.upper)
    return value


def solve(cs: ConstraintSet) -> SolveReport:
    """Optimal integer plan; among optima, larger values at lower node ids win."""
    a = _matrix(cs)
    rhs = [r.rhs for r in cs.rows]
    weights = tie_break_weights(cs)
    root_bound = lp_relaxation_bound(cs)

    best: list[int] | None = None
    best_w: int | None = None
    explored = 0
    stack = [(tuple(cs.lower), tuple(cs.upper))]
    while stack:
        lo, hi = stack.pop()
        explored += 1
        if any(l > h for l, h in zip(lo, hi)):
            continue
        # every point below ``hi`` has a smaller total, or equals ``hi``
        if best is not None:
            total = sum(hi)
            if total < sum(best) or (total == sum(best) and list(hi) <= best):
                continue
        gamma, value = _relax(weights, a, rhs, lo, hi)
        if gamma is None:
            continue
        if best_w is not None and math.floor(value) <= best_w:
            continue
        frac = [(g, -j) for j, g in enumerate(gamma) if g.denominator != 1]
        if not frac:
            point = [int(g) for g in gamma]
            w = sum(wi * g for wi, g in zip(weights, point))
            if best_w is None or w > best_w:
                best, best_w = point, w
            continue
        g, neg_j = max(frac)
        j = -neg_j
        down_hi = list(hi)
        down_hi[j] = math.floor(g)
        up_lo = list(lo)
        up_lo[j] = math.ceil(g)
        stack.append((tuple(up_lo), hi))
        stack.append((lo, tuple(down_hi)))

    if best is None:
        return SolveReport(None, 0, SolveStatus.INFEASIBLE, explored, root_bound)
    plan = BundlingPlan(dict(zip(cs.nodes, best)))
    return SolveReport(plan, sum(best), SolveStatus.OPTIMAL, explored, root_bound)
