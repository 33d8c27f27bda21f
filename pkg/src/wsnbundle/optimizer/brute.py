"""Exhaustive-enumeration oracle for the bundling ILP."""

from __future__ import annotations

import math
import os

from ..errors import InstanceTooLarge
from ..model import BundlingPlan
from . import _kernels_py
from .bnb import SolveReport, SolveStatus
from .constraints import ConstraintSet

MAX_POINTS = 10**7
_INT64_LIMIT = 2**62

try:
    if os.environ.get("WSNBUNDLE_PURE_PYTHON"):
        raise ImportError("compiled kernels disabled by WSNBUNDLE_PURE_PYTHON")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"


def integer_rows(cs: ConstraintSet) -> tuple[list[list[int]], list[int]]:
    """Scale every row by the lcm of its denominators so it becomes integral."""
    a, b = [], []
    for row in cs.rows:
        dense = [0] * len(cs.nodes)
        values = [c for _, c in row.coefs] + [row.rhs]
        scale = math.lcm(*(v.denominator for v in values))
        for node, coef in row.coefs:
            dense[cs.index(node)] += int(coef * scale)
        a.append(dense)
        b.append(math.floor(row.rhs * scale))
    return a, b


def box_size(cs: ConstraintSet) -> int:
    return math.prod(max(hi - lo + 1, 0) for lo, hi in zip(cs.lower, cs.upper))


def enumerate_box(lo, hi, a, b, backend: str | None = None):
    """Dispatch to the compiled kernel when present and the values fit in int64."""
    backend = backend or BACKEND
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not built")
        worst = max((sum(v * h for v, h in zip(row, hi)) for row in a), default=0)
        if worst < _INT64_LIMIT and max(map(abs, b), default=0) < _INT64_LIMIT:
            return _compiled.enumerate_box(lo, hi, a, b)
    return _kernels_py.enumerate_box(lo, hi, a, b)


def brute_force_solve(cs: ConstraintSet, backend: str | None = None) -> SolveReport:
    """Scan every integer point of the box; ties go to larger values at lower ids."""
    size = box_size(cs)
    if size > MAX_POINTS:
        raise InstanceTooLarge(f"{size} points exceed the enumeration guard of {MAX_POINTS}")
    a, b = integer_rows(cs)
    best, total, visited = enumerate_box(list(cs.lower), list(cs.upper), a, b, backend)
    if best is None:
        return SolveReport(None, 0, SolveStatus.INFEASIBLE, visited, None)
    plan = BundlingPlan(dict(zip(cs.nodes, best)))
    return SolveReport(plan, total, SolveStatus.OPTIMAL, visited, None)
