"""Discrete-event engine. ``run`` is a pure function of its config."""

from __future__ import annotations

import heapq
import math
import random
from collections import deque
from dataclasses import replace
from fractions import Fraction

from ..delay import service_delay_simplified
from ..messages import BundledMessage, MeasurementRecord
from ..model import HEAD, EnergyCounts, NodeId, round_half_up
from ..sync import ClockState, SyncSample, local_time, quantize, true_time_of
from .config import BundlingMode, ScenarioConfig
from .head_agent import HeadRuntime
from .trace import TraceSet

# same-time ordering: deliveries first, then beacons, then measurement ticks
_ARRIVAL, _BEACON, _MEASURE, _REQUIREMENT = 0, 1, 2, 3

_OFFSET_RANGE = (1_000_000, 2_000_000)  # local clocks start 1..2 s ahead, keeps stamps positive


class _Node:
    def __init__(self, nid, parent, depth, clock, gamma, tick_base, beacon_phase):
        self.id = nid
        self.parent = parent
        self.depth = depth
        self.clock = clock
        self.gamma = gamma
        self.tick_base = tick_base
        self.beacon_phase = beacon_phase
        self.own: deque[MeasurementRecord] = deque()
        self.off: deque[MeasurementRecord] = deque()
        self.busy_until = 0
        self.t1 = 0
        self.t2 = 0
        self.msg_seq = 0
        self.relayed: set[tuple[NodeId, NodeId]] = set()
        self.pending: list[tuple[int, int]] = []  # (apply_at, gamma)
        self.sync_ref: SyncSample | None = None  # earliest own beacon pair
        self.child_ref: dict[NodeId, SyncSample] = {}
        self.counts = EnergyCounts()


class _Simulation:
    def __init__(self, cfg: ScenarioConfig):
        self.cfg = cfg
        self.topo = cfg.topology
        self.rng = random.Random(cfg.seed)
        self.link = cfg.d_prop + service_delay_simplified(cfg.service)
        self.head = HeadRuntime(cfg.table, cfg.i_meas)
        self.trace = TraceSet(
            self.topo.sensors, cfg.duration, cfg.window, cfg.bundling_mode, cfg.energy
        )
        self.events: list = []
        self._seq = 0
        self.true_meas: dict[tuple[NodeId, int], int] = {}
        self.nodes: dict[NodeId, _Node] = {}
        for n in self.topo.sensors:
            clock = ClockState(
                cfg.drifts_ppm.get(n, 0), self.rng.randrange(*_OFFSET_RANGE), 0
            )
            start = self.rng.randrange(cfg.i_meas)
            node = _Node(
                n, self.topo.parent[n], self.topo.depth(n), clock, cfg.start_gamma,
                math.ceil(local_time(clock, start)), self.rng.randrange(cfg.i_meas),
            )
            # join beacon: every node holds a valid t1/t2 pair before its first send
            node.t2 = quantize(local_time(clock, 0), cfg.tick)
            node.sync_ref = SyncSample(0, node.t2, node.t2, n)
            self.nodes[n] = node
            self.trace.generated[n] = 0
            self._push(self._tick_time(node, 0), n, _MEASURE, 0)
            self._push(node.beacon_phase, n, _BEACON, 0)
        for k, (at, _) in enumerate(cfg.schedule):
            self._push(at, HEAD, _REQUIREMENT, k)

    def _push(self, time, node, kind, payload):
        self._seq += 1
        heapq.heappush(self.events, (time, node, kind, self._seq, payload))

    def _tick_time(self, node: _Node, k: int) -> int:
        return math.ceil(true_time_of(node.clock, node.tick_base + k * self.cfg.i_meas))

    def _local(self, node: _Node, t: int) -> int:
        return quantize(local_time(node.clock, t), self.cfg.tick)

    def run(self) -> TraceSet:
        handlers = {
            _ARRIVAL: self._on_arrival,
            _BEACON: self._on_beacon,
            _MEASURE: self._on_measure,
            _REQUIREMENT: self._on_requirement,
        }
        duration = self.cfg.duration
        while self.events and self.events[0][0] < duration:
            t, node, kind, _, payload = heapq.heappop(self.events)
            handlers[kind](t, node, payload)
        tr = self.trace
        tr.energy = {n: node.counts for n, node in self.nodes.items()}
        tr.plans = list(self.head.plans)
        tr.notes = list(self.head.notes)
        return tr

    # node side

    def _on_measure(self, now, nid, k):
        node = self.nodes[nid]
        if k >= 1:
            # the sample acquired over the previous interval is ready at this tick
            rec = MeasurementRecord(
                nid, k - 1, node.tick_base + (k - 1) * self.cfg.i_meas, self.rng.getrandbits(16)
            )
            self.true_meas[nid, k - 1] = self._tick_time(node, k - 1)
            self.trace.generated[nid] += 1
            if self.cfg.bundling_mode is BundlingMode.NONE:
                node.counts.alpha += 1
                self._send(node, now, (rec,))
            else:
                node.own.append(rec)
                self._try_bundle(node, now)
        self._push(self._tick_time(node, k + 1), nid, _MEASURE, k + 1)

    def _try_bundle(self, node: _Node, now: int) -> None:
        merge = self.cfg.bundling_mode is BundlingMode.ALL_DATA
        while True:
            avail = len(node.own) + (len(node.off) if merge else 0)
            if avail == 0 or avail < node.gamma:
                return
            take = []
            while len(take) < node.gamma and node.own:
                take.append(node.own.popleft())
            while len(take) < node.gamma and merge and node.off:
                take.append(node.off.popleft())
            node.counts.delta += 1
            self.trace.bundle_sizes.append((now, node.id, node.gamma, len(take)))
            self._send(node, now, tuple(take))

    def _send(self, node: _Node, now: int, entries) -> None:
        dep = max(now, node.busy_until)
        sync = SyncSample(node.t1, node.t2, self._local(node, dep), node.id)
        msg = BundledMessage(node.id, node.parent, sync, entries, node.msg_seq % 65536)
        node.msg_seq += 1
        self._transmit(node, dep, msg)

    def _transmit(self, node: _Node, dep: int, msg: BundledMessage) -> None:
        dep = max(dep, node.busy_until)
        arrival = dep + self.link
        node.busy_until = arrival
        self.trace.tx.append((dep, node.id))
        self.trace.streams.setdefault(node.id, set()).update(e.origin for e in msg.entries)
        self._push(arrival, node.parent, _ARRIVAL, msg)

    def _on_arrival(self, now, nid, msg: BundledMessage):
        self.trace.rx.append((now, nid))
        if nid == HEAD:
            self._at_head(now, msg)
            return
        node = self.nodes[nid]
        mode = self.cfg.bundling_mode
        if mode is not BundlingMode.ALL_DATA:
            node.counts.gamma_fwd += 1
            self._transmit(node, now, msg)
            return
        ref = node.child_ref.setdefault(msg.sender, msg.sync)
        key = (msg.sender, msg.parent)
        if key not in node.relayed:
            # first contact passes through intact so the head learns the link
            node.relayed.add(key)
            node.counts.delta += 1
            self._transmit(node, now, msg)
            return
        rx_local = self._local(node, now)
        # child ticks to own ticks, both rates measured against beacon (head) time
        scale = _rate(node.sync_ref, SyncSample(node.t1, node.t2, node.t2)) / _rate(ref, msg.sync)
        for e in msg.entries:
            age = round_half_up((msg.sync.t3 - e.t_meas_node) * scale)
            node.off.append(replace(e, t_meas_node=rx_local - self.link - age))
        self._try_bundle(node, now)

    def _on_beacon(self, now, nid, k):
        node = self.nodes[nid]
        node.t1 = now
        node.t2 = self._local(node, now)
        if node.pending:
            due = [p for p in node.pending if p[0] <= now]
            if due:
                node.pending = [p for p in node.pending if p[0] > now]
                node.gamma = due[-1][1]
                self.trace.applied.append((now, nid, node.gamma))
                if self.cfg.bundling_mode is not BundlingMode.NONE:
                    self._try_bundle(node, now)
        self._push(node.beacon_phase + (k + 1) * self.cfg.i_meas, nid, _BEACON, k + 1)

    # head side

    def _at_head(self, now, msg):
        self.trace.delivered.extend((e.origin, e.seq) for e in msg.entries)
        samples, updates = self.head.receive(now, msg)
        for s in samples:
            truth = self.true_meas.get((s.origin, s.seq))
            self.trace.delays.append(
                replace(s, true_e2e=None if truth is None else now - truth)
            )
        self._schedule(updates)

    def _on_requirement(self, now, _nid, k):
        at, req = self.cfg.schedule[k]
        updates = self.head.set_requirement(now, req)
        bound = self.head.status.bound if self.head.requirement is req else None
        self.trace.requirements.append((now, req, bound))
        self._schedule(updates)

    def _schedule(self, updates):
        for u in updates:
            self.nodes[u.node].pending.append((u.apply_at, u.gamma))


def _rate(first: SyncSample, last: SyncSample) -> Fraction:
    """Long-baseline clock rate; 1 until two distinct beacons have been seen."""
    if last.t1 == first.t1:
        return Fraction(1)
    return Fraction(last.t2 - first.t2, last.t1 - first.t1)


def run(cfg: ScenarioConfig) -> TraceSet:
    """Simulate ``cfg`` and return the recorded traces."""
    return _Simulation(cfg).run()
