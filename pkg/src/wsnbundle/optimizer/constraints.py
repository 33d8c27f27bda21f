"""Constraint generation for the bundling ILP."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..errors import InfeasibleBounds
from ..model import US_PER_S, NodeId, RequirementSet, Topology
from ..sync import AHTS_TABLE, AccuracyTable, accuracy_to_si


@dataclass(frozen=True)
class Row:
    """``sum(coefs[n] * G[n]) <= rhs`` along the path of ``node`` (origin first); units are us."""

    node: NodeId
    coefs: tuple[tuple[NodeId, Fraction], ...]
    rhs: Fraction

    def lhs(self, gamma) -> Fraction:
        return sum((c * gamma[n] for n, c in self.coefs), Fraction(0))

    def slack(self, gamma) -> Fraction:
        return self.rhs - self.lhs(gamma)


@dataclass(frozen=True)
class ConstraintSet:
    nodes: tuple[NodeId, ...]
    lower: tuple[int, ...]
    upper: tuple[int, ...]
    rows: tuple[Row, ...]
    bound: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        if not (len(self.nodes) == len(self.lower) == len(self.upper)):
            raise ValueError("nodes and bounds differ in length")
        if list(self.nodes) != sorted(set(self.nodes)):
            raise ValueError("nodes must be unique and ascending")
        index = set(self.nodes)
        for row in self.rows:
            for n, c in row.coefs:
                if n not in index:
                    raise ValueError(f"row for node {row.node} references unknown node {n}")
                if c <= 0:
                    raise ValueError("row coefficients must be strictly positive")

    def index(self, node: NodeId) -> int:
        return self.nodes.index(node)

    def is_feasible(self, gamma) -> bool:
        for n, lo, hi in zip(self.nodes, self.lower, self.upper):
            if not lo <= gamma[n] <= hi:
                return False
        return all(row.slack(gamma) >= 0 for row in self.rows)

    def dump(self) -> str:
        """One line per row, coefficients and bound in seconds."""
        lines = []
        for row in self.rows:
            terms = " + ".join(f"{_fmt(c / US_PER_S)}*G{n}" for n, c in row.coefs)
            lines.append(f"{terms} <= {_fmt(row.rhs / US_PER_S)}")
        for n, lo, hi in zip(self.nodes, self.lower, self.upper):
            lines.append(f"{lo} <= G{n} <= {hi}")
        return "\n".join(lines) + "\n"


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


_TERM = re.compile(r"^\s*(-?\d+(?:/\d+)?)\*G(\d+)\s*$")
_BOX = re.compile(r"^\s*(\d+)\s*<=\s*G(\d+)\s*<=\s*(\d+)\s*$")


def parse_constraints(text: str) -> ConstraintSet:
    """Inverse of :meth:`ConstraintSet.dump`."""
    rows, box = [], {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        m = _BOX.match(line)
        if m:
            box[int(m.group(2))] = (int(m.group(1)), int(m.group(3)))
            continue
        lhs, sep, rhs = line.partition("<=")
        if not sep:
            raise ValueError(f"line {lineno}: missing '<='")
        coefs = []
        for term in lhs.split("+"):
            t = _TERM.match(term)
            if not t:
                raise ValueError(f"line {lineno}: bad term {term.strip()!r}")
            coefs.append((int(t.group(2)), Fraction(t.group(1)) * US_PER_S))
        rows.append(Row(coefs[0][0], tuple(coefs), Fraction(rhs.strip()) * US_PER_S))
    nodes = tuple(sorted(box))
    bound = rows[0].rhs if rows else Fraction(0)
    return ConstraintSet(
        nodes, tuple(box[n][0] for n in nodes), tuple(box[n][1] for n in nodes),
        tuple(rows), bound,
    )


def effective_delay_bound(
    d_e2e_max: int, sa_min, table: AccuracyTable = AHTS_TABLE
) -> int:
    """Tighter of the delay requirement and the SI the accuracy target allows."""
    return min(d_e2e_max, accuracy_to_si(sa_min, table))


def build_constraints(
    topology: Topology, req: RequirementSet, table: AccuracyTable = AHTS_TABLE
) -> ConstraintSet:
    bound = Fraction(effective_delay_bound(req.d_e2e_max, req.sa_min, table))
    nodes = topology.sensors
    rows = []
    for node in nodes:
        path = topology.path(node)
        coefs = tuple((n, Fraction(req.i_meas, 1 + topology.offspring[n])) for n in path)
        rows.append(Row(node, coefs, bound))

    floor = {row.node: sum(c for _, c in row.coefs) * req.chi_min for row in rows}
    floor_violations = tuple(n for n in nodes if floor[n] > bound)
    if floor_violations:
        worst = rows[nodes.index(max(floor_violations, key=lambda n: (floor[n], -n)))]
        need = floor[worst.node] / US_PER_S
        raise InfeasibleBounds(
            f"node(s) {list(floor_violations)} exceed the delay bound "
            f"{float(bound / US_PER_S):g} s even at chi_min={req.chi_min} "
            f"(node {worst.node} needs {float(need):g} s)",
            floor_violations,
        )
    return ConstraintSet(
        nodes,
        tuple(req.chi_min for _ in nodes),
        tuple(req.chi_max for _ in nodes),
        tuple(rows),
        bound,
    )
