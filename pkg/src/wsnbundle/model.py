"""Domain types and topology handling.

Durations are integer microseconds throughout the package unless a name says
otherwise. Synchronization accuracies are the exception: table values go down
to 1e-24 s, so they are kept as exact ``Fraction`` seconds.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType

from .errors import (
    CycleDetected,
    DisconnectedNode,
    IncompletePlan,
    MissingHead,
    MultipleParents,
    UnknownNode,
)

NodeId = int
HEAD: NodeId = 0

US_PER_S = 1_000_000


def seconds_to_us(value: float | str | Fraction) -> int:
    """Decimal seconds to integer microseconds, rounding half up."""
    exact = Fraction(str(value)) if isinstance(value, float) else Fraction(value)
    return round_half_up(exact * US_PER_S)


def round_half_up(x: Fraction) -> int:
    return int((x + Fraction(1, 2)).__floor__())


@dataclass(frozen=True)
class Topology:
    """Rooted tree with the head (id 0) as root.

    Built through :func:`validate_topology`; the derived maps are computed once.
    """

    parent: Mapping[NodeId, NodeId]
    children: Mapping[NodeId, tuple[NodeId, ...]] = field(repr=False)
    offspring: Mapping[NodeId, int] = field(repr=False)
    paths: Mapping[NodeId, tuple[NodeId, ...]] = field(repr=False)

    @property
    def sensors(self) -> tuple[NodeId, ...]:
        return tuple(sorted(self.parent))

    @property
    def edges(self) -> tuple[tuple[NodeId, NodeId], ...]:
        return tuple((c, self.parent[c]) for c in self.sensors)

    def path(self, node: NodeId) -> tuple[NodeId, ...]:
        """Nodes from ``node`` up to (excluding) the head."""
        try:
            return self.paths[node]
        except KeyError:
            raise UnknownNode(node) from None

    def depth(self, node: NodeId) -> int:
        return len(self.path(node))

    def __contains__(self, node: object) -> bool:
        return node in self.parent

    def __len__(self) -> int:
        return len(self.parent)


def validate_topology(edges: Iterable[tuple[NodeId, NodeId]]) -> Topology:
    """Check that ``(child, parent)`` edges form a tree rooted at the head."""
    edges = [(int(c), int(p)) for c, p in edges]
    if not edges:
        raise MissingHead("edge list is empty")

    ups: dict[NodeId, set[NodeId]] = {}
    for child, par in edges:
        if child < 0 or par < 0:
            raise ValueError(f"negative node id in edge ({child}, {par})")
        if child == par:
            raise CycleDetected(f"node {child} is its own parent", (child,))
        ups.setdefault(child, set()).add(par)

    _check_acyclic(ups)

    parent: dict[NodeId, NodeId] = {}
    for child in sorted(ups):
        if child == HEAD:
            raise MultipleParents("the head cannot have a parent", (HEAD,))
        if len(ups[child]) > 1:
            raise MultipleParents(
                f"node {child} has parents {sorted(ups[child])}", (child,)
            )
        parent[child] = next(iter(ups[child]))

    orphans = sorted({p for p in parent.values() if p != HEAD and p not in parent})
    if orphans:
        raise DisconnectedNode(f"node(s) {orphans} have no parent", tuple(orphans))

    paths: dict[NodeId, tuple[NodeId, ...]] = {}
    for start in sorted(parent):
        walk = [start]
        node = parent[start]
        while node != HEAD:
            walk.append(node)
            node = parent[node]
        paths[start] = tuple(walk)

    if HEAD not in parent.values():
        raise MissingHead("no edge reaches the head (node 0)")

    children: dict[NodeId, list[NodeId]] = {n: [] for n in [HEAD, *parent]}
    for child in sorted(parent):
        children[parent[child]].append(child)
    offspring = {n: 0 for n in parent}
    for n, path in paths.items():
        for ancestor in path[1:]:
            offspring[ancestor] += 1

    return Topology(
        parent=MappingProxyType(dict(parent)),
        children=MappingProxyType({k: tuple(v) for k, v in children.items()}),
        offspring=MappingProxyType(offspring),
        paths=MappingProxyType(paths),
    )


def _check_acyclic(ups: Mapping[NodeId, set[NodeId]]) -> None:
    state: dict[NodeId, int] = {}  # 1 = on stack, 2 = done
    for root in sorted(ups):
        if state.get(root):
            continue
        stack = [(root, iter(sorted(ups.get(root, ()))))]
        trail = [root]
        state[root] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                state[node] = 2
                stack.pop()
                trail.pop()
                continue
            if state.get(nxt) == 1:
                cycle = tuple(sorted(trail[trail.index(nxt):]))
                raise CycleDetected(f"cycle through nodes {list(cycle)}", cycle)
            if not state.get(nxt):
                state[nxt] = 1
                trail.append(nxt)
                stack.append((nxt, iter(sorted(ups.get(nxt, ())))))


def offspring_count(topology: Topology, node: NodeId) -> int:
    """Number of sensor nodes anywhere below ``node`` (all descendants)."""
    try:
        return topology.offspring[node]
    except KeyError:
        raise UnknownNode(node) from None


@dataclass(frozen=True)
class RequirementSet:
    d_e2e_max: int
    sa_min: Fraction
    chi_min: int = 1
    chi_max: int = 15
    i_meas: int = US_PER_S

    def __post_init__(self) -> None:
        if self.chi_min < 1:
            raise ValueError(f"chi_min must be >= 1, got {self.chi_min}")
        if self.chi_max < self.chi_min:
            raise ValueError(f"chi_max {self.chi_max} < chi_min {self.chi_min}")
        if self.d_e2e_max <= 0:
            raise ValueError("d_e2e_max must be positive")
        if self.i_meas <= 0:
            raise ValueError("i_meas must be positive")
        if self.sa_min < 0:
            raise ValueError("sa_min must be non-negative")


@dataclass(frozen=True)
class BundlingPlan:
    gamma: Mapping[NodeId, int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "gamma", MappingProxyType(dict(sorted(self.gamma.items()))))
        for node, g in self.gamma.items():
            if g < 1:
                raise ValueError(f"bundling number for node {node} must be >= 1, got {g}")

    def __getitem__(self, node: NodeId) -> int:
        return self.gamma[node]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BundlingPlan):
            return NotImplemented
        return dict(self.gamma) == dict(other.gamma)

    def __hash__(self) -> int:
        return hash(tuple(self.gamma.items()))

    @property
    def total(self) -> int:
        return sum(self.gamma.values())

    def require(self, nodes: Iterable[NodeId]) -> None:
        missing = tuple(sorted(n for n in nodes if n not in self.gamma))
        if missing:
            raise IncompletePlan(missing)

    def check_bounds(self, chi_min: int, chi_max: int) -> bool:
        return all(chi_min <= g <= chi_max for g in self.gamma.values())

    @classmethod
    def uniform(cls, nodes: Iterable[NodeId], value: int) -> BundlingPlan:
        return cls({n: value for n in nodes})


@dataclass(frozen=True)
class EnergyParams:
    e_meas: int = 1
    e_sync: int = 1
    e_fwd: int = 1
    e_bundle: int = 1

    def __post_init__(self) -> None:
        for name in ("e_meas", "e_sync", "e_fwd", "e_bundle"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")


@dataclass
class EnergyCounts:
    """Per-node transmission tallies; only ever incremented during a run."""

    alpha: int = 0
    beta: int = 0
    gamma_fwd: int = 0
    delta: int = 0


@dataclass(frozen=True)
class DelaySample:
    """One end-to-end delay observed at the head.

    ``t_meas`` is the measurement time translated to the head clock and
    ``e2e`` the head's estimate; ``true_e2e`` is ground truth where the
    producer knows it (the simulator does).
    """

    arrival: int
    origin: NodeId
    e2e: int
    t_meas: int
    seq: int = 0
    true_e2e: int | None = None
