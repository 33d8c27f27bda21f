"""Head-side maintenance: path recovery, delay monitoring, re-optimization
and parameter dissemination.

Each operation is a state transition returning new state; the simulator's
head agent strings them together into the control loop.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field, replace
from fractions import Fraction
from types import MappingProxyType

from .errors import InfeasibleBounds, TopologyError
from .messages import BundledMessage
from .model import BundlingPlan, DelaySample, NodeId, RequirementSet, Topology, validate_topology
from .optimizer import build_constraints, solve
from .sync import AHTS_TABLE, AccuracyTable


@dataclass(frozen=True)
class PathTable:
    parent: Mapping[NodeId, NodeId] = field(default_factory=lambda: MappingProxyType({}))
    snapshot: Topology | None = None
    revision: int = 0
    pending: bool = False


def update_paths(table: PathTable, msg: BundledMessage) -> tuple[PathTable, bool]:
    """Fold the sender/parent pair of ``msg`` into the table.

    Returns the new table and whether the validated tree changed. Parent maps
    that do not form a tree yet (churn, nodes whose parents have not reported)
    are kept pending and the last valid snapshot stays in force.
    """
    if table.parent.get(msg.sender) == msg.parent:
        return table, False
    parent = dict(table.parent)
    parent[msg.sender] = msg.parent
    revision = table.revision + 1
    try:
        snapshot = validate_topology(parent.items())
    except TopologyError:
        return PathTable(MappingProxyType(parent), table.snapshot, revision, True), False
    changed = table.snapshot is None or dict(snapshot.parent) != dict(table.snapshot.parent)
    return PathTable(MappingProxyType(parent), snapshot, revision, False), changed


@dataclass(frozen=True)
class NodeStats:
    samples: int = 0
    violations: int = 0
    max_delay: int | None = None


@dataclass(frozen=True)
class MonitorStatus:
    """Delay statistics judged against the bound active when each sample was measured."""

    bound: int | None = None
    since: int = 0
    history: tuple[tuple[int, int], ...] = ()
    nodes: Mapping[NodeId, NodeStats] = field(default_factory=lambda: MappingProxyType({}))

    def with_requirement(self, since: int, bound: int) -> MonitorStatus:
        """Start judging samples measured from ``since`` on against ``bound``."""
        return MonitorStatus(bound, since, self.history + ((since, bound),), MappingProxyType({}))

    def bound_at(self, t_meas) -> int | None:
        active = None
        for since, bound in self.history:
            if since <= t_meas:
                active = bound
        return active

    @property
    def samples(self) -> int:
        return sum(s.samples for s in self.nodes.values())

    @property
    def violations(self) -> int:
        return sum(s.violations for s in self.nodes.values())


def monitor(status: MonitorStatus, sample: DelaySample) -> MonitorStatus:
    # samples measured under an older requirement do not count toward the current one
    if status.bound is None or sample.t_meas < status.since:
        return status
    prev = status.nodes.get(sample.origin, NodeStats())
    stats = NodeStats(
        prev.samples + 1,
        prev.violations + (sample.e2e > status.bound),
        sample.e2e if prev.max_delay is None else max(prev.max_delay, sample.e2e),
    )
    nodes = dict(status.nodes)
    nodes[sample.origin] = stats
    return replace(status, nodes=MappingProxyType(nodes))


def reoptimize(
    paths: PathTable, req: RequirementSet, table: AccuracyTable = AHTS_TABLE
) -> BundlingPlan:
    """Solve the bundling ILP for the current path snapshot."""
    if paths.snapshot is None:
        raise ValueError("no valid path snapshot yet")
    report = solve(build_constraints(paths.snapshot, req, table))
    if not report.optimal:
        raise InfeasibleBounds("no integer plan satisfies the delay bounds", paths.snapshot.sensors)
    return report.plan


@dataclass(frozen=True)
class ParameterUpdate:
    node: NodeId
    gamma: int
    apply_at: int


def disseminate(
    plan: BundlingPlan, paths: PathTable, now: int = 0, beacon_interval: int = 1_000_000
) -> list[ParameterUpdate]:
    """Per-node updates; a node ``d`` hops down hears its value after ``d`` beacons."""
    if paths.snapshot is None:
        raise ValueError("no valid path snapshot yet")
    topo = paths.snapshot
    plan.require(topo.sensors)
    return [
        ParameterUpdate(n, plan[n], now + topo.depth(n) * beacon_interval)
        for n in topo.sensors
    ]


def violation_rate(status: MonitorStatus) -> Fraction:
    n = status.samples
    return Fraction(status.violations, n) if n else Fraction(0)
