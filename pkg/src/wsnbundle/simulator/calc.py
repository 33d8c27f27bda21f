"""Head-side delay calculation and post-run tallies."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from ..errors import MissingEstimate
from ..messages import BundledMessage
from ..model import DelaySample, EnergyCounts, EnergyParams, NodeId, round_half_up
from ..sync import SkewEstimate, translate_timestamp
from .config import BundlingMode


def delay_calculator(
    arrival: int, msg: BundledMessage, est: SkewEstimate | None
) -> list[DelaySample]:
    """E2E delay of every entry in ``msg``.

    Entry timestamps are in the sender's clock (gateways restamp merged
    entries), so the sender's estimate translates all of them.
    """
    if est is None:
        raise MissingEstimate(msg.sender)
    out = []
    for e in msg.entries:
        t_meas = round_half_up(translate_timestamp(est, e.t_meas_node))
        out.append(DelaySample(arrival, e.origin, arrival - t_meas, t_meas, e.seq))
    return out


@dataclass(frozen=True)
class EnergyReport:
    per_node: Mapping[NodeId, int]
    total: int


def node_energy(c: EnergyCounts, p: EnergyParams, mode: BundlingMode | str) -> int:
    mode = BundlingMode(mode)
    if mode is BundlingMode.NONE:
        return c.alpha * p.e_meas + c.beta * p.e_sync + c.gamma_fwd * p.e_fwd
    if mode is BundlingMode.ALL_DATA:
        return c.delta * p.e_bundle
    return c.delta * p.e_bundle + c.gamma_fwd * p.e_fwd


def energy_tally(
    counts: Mapping[NodeId, EnergyCounts], params: EnergyParams, mode: BundlingMode | str
) -> EnergyReport:
    """Per-node transmission energy and the network total."""
    per_node = {n: node_energy(c, params, mode) for n, c in sorted(counts.items())}
    return EnergyReport(per_node, sum(per_node.values()))


@dataclass(frozen=True)
class WindowCount:
    window_start: int
    node: NodeId
    rx: int
    tx: int

    @property
    def total(self) -> int:
        return self.rx + self.tx


def message_counts(
    rx: Iterable[tuple[int, NodeId]],
    tx: Iterable[tuple[int, NodeId]],
    nodes: Iterable[NodeId],
    duration: int,
    window: int,
) -> list[WindowCount]:
    """Tumbling-window rx/tx tallies; events at or after ``duration`` are dropped."""
    if window <= 0:
        raise ValueError("window must be positive")
    nodes = sorted(nodes)
    n_windows = -(-duration // window)
    grid = {(k, n): [0, 0] for k in range(n_windows) for n in nodes}
    for col, events in ((0, rx), (1, tx)):
        for t, node in events:
            if 0 <= t < duration and (t // window, node) in grid:
                grid[t // window, node][col] += 1
    return [
        WindowCount(k * window, n, *grid[k, n]) for k in range(n_windows) for n in nodes
    ]


def mean_window_total(counts: Iterable[WindowCount], nodes: Iterable[NodeId]) -> float:
    """Average rx+tx per window, averaged over ``nodes``."""
    nodes = set(nodes)
    per_node: dict[NodeId, list[int]] = {n: [] for n in nodes}
    for w in counts:
        if w.node in nodes:
            per_node[w.node].append(w.total)
    means = [sum(v) / len(v) for v in per_node.values() if v]
    return sum(means) / len(means) if means else 0.0
