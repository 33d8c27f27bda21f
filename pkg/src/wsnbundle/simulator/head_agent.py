"""The head's control loop inside a simulation run."""

from __future__ import annotations

from ..errors import InfeasibleBounds, MissingEstimate, UnsatisfiableAccuracy
from ..head import MonitorStatus, ParameterUpdate, PathTable, disseminate, monitor, reoptimize, update_paths
from ..messages import BundledMessage
from ..model import BundlingPlan, DelaySample, NodeId, RequirementSet
from ..optimizer import effective_delay_bound
from ..sync import AccuracyTable, SkewEstimate, SyncSample, update_skew
from .calc import delay_calculator


class HeadRuntime:
    """Path maintenance, sync translation, monitoring and re-planning at the head.

    Re-planning is edge-triggered: a requirement activation or a change in
    the recovered tree. When the solver cannot satisfy the bound, the last
    plan stays in force and the condition lands in ``notes``.
    """

    def __init__(self, table: AccuracyTable, beacon_interval: int):
        self.table = table
        self.beacon_interval = beacon_interval
        self.paths = PathTable()
        self.requirement: RequirementSet | None = None
        self.status = MonitorStatus()
        self.plan: BundlingPlan | None = None
        self.plans: list[tuple[int, BundlingPlan]] = []
        self.notes: list[tuple[int, str]] = []
        self.estimates: dict[NodeId, SkewEstimate] = {}
        self._last_sync: dict[NodeId, SyncSample] = {}

    def set_requirement(self, now: int, req: RequirementSet) -> list[ParameterUpdate]:
        try:
            bound = effective_delay_bound(req.d_e2e_max, req.sa_min, self.table)
        except UnsatisfiableAccuracy as exc:
            self.notes.append((now, f"requirement rejected: {exc}"))
            return []
        self.requirement = req
        self.status = self.status.with_requirement(now, bound)
        return self._replan(now)

    def receive(self, now: int, msg: BundledMessage) -> tuple[list[DelaySample], list[ParameterUpdate]]:
        self.paths, changed = update_paths(self.paths, msg)
        samples = self._delays(now, msg)
        for s in samples:
            self.status = monitor(self.status, s)
        updates = self._replan(now) if changed else []
        return samples, updates

    def _delays(self, now: int, msg: BundledMessage) -> list[DelaySample]:
        sender = msg.sender
        prev_sample = self._last_sync.get(sender)
        self._last_sync[sender] = msg.sync
        est = self.estimates.get(sender)
        if est is not None and prev_sample is not None and msg.sync.t1 != prev_sample.t1:
            est = update_skew(est, msg.sync, prev_sample)
            self.estimates[sender] = est
        try:
            return delay_calculator(now, msg, est)
        except MissingEstimate:
            self.estimates[sender] = update_skew(None, msg.sync)
            return []

    def _replan(self, now: int) -> list[ParameterUpdate]:
        if self.requirement is None or self.paths.snapshot is None:
            return []
        try:
            plan = reoptimize(self.paths, self.requirement, self.table)
        except (InfeasibleBounds, UnsatisfiableAccuracy) as exc:
            self.notes.append((now, f"holding previous plan: {exc}"))
            return []
        self.plan = plan
        self.plans.append((now, plan))
        return disseminate(plan, self.paths, now, self.beacon_interval)
