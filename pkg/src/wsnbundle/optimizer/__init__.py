"""Bundling ILP: constraint generation, exact solver and brute-force oracle."""

from .bnb import SolveReport, SolveStatus, lp_relaxation_bound, solve
from .brute import BACKEND, brute_force_solve
from .constraints import (
    ConstraintSet,
    Row,
    build_constraints,
    effective_delay_bound,
    parse_constraints,
)

__all__ = [
    "BACKEND",
    "ConstraintSet",
    "Row",
    "SolveReport",
    "SolveStatus",
    "brute_force_solve",
    "build_constraints",
    "effective_delay_bound",
    "lp_relaxation_bound",
    "parse_constraints",
    "solve",
]
