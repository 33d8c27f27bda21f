from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

from ..model import US_PER_S, BundlingPlan, DelaySample, EnergyCounts, EnergyParams, NodeId, RequirementSet
from .calc import WindowCount, energy_tally, message_counts
from .config import BundlingMode


def fmt_us(us: int) -> str:
    """Integer microseconds as exact decimal seconds."""
    sign = "-" if us < 0 else ""
    q, r = divmod(abs(us), US_PER_S)
    return f"{sign}{q}.{r:06d}"


@dataclass
class TraceSet:
    sensors: tuple[NodeId, ...]
    duration: int
    window: int
    mode: BundlingMode
    energy_params: EnergyParams
    delays: list[DelaySample] = field(default_factory=list)
    rx: list[tuple[int, NodeId]] = field(default_factory=list)
    tx: list[tuple[int, NodeId]] = field(default_factory=list)
    energy: dict[NodeId, EnergyCounts] = field(default_factory=dict)
    plans: list[tuple[int, BundlingPlan]] = field(default_factory=list)
    applied: list[tuple[int, NodeId, int]] = field(default_factory=list)
    requirements: list[tuple[int, RequirementSet, int]] = field(default_factory=list)
    notes: list[tuple[int, str]] = field(default_factory=list)
    generated: dict[NodeId, int] = field(default_factory=dict)
    bundle_sizes: list[tuple[int, NodeId, int, int]] = field(default_factory=list)
    delivered: list[tuple[NodeId, int]] = field(default_factory=list)
    streams: dict[NodeId, set[NodeId]] = field(default_factory=dict)  # origins each node transmitted

    def message_counts(self, window: int | None = None) -> list[WindowCount]:
        nodes = (0, *self.sensors)
        return message_counts(self.rx, self.tx, nodes, self.duration, window or self.window)

    def energy_report(self):
        return energy_tally(self.energy, self.energy_params, self.mode)

    def write_csv(self, outdir: str | Path) -> list[Path]:
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        written = []

        def emit(name, header, rows):
            path = outdir / name
            with open(path, "w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(header)
                w.writerows(rows)
            written.append(path)

        emit("delays.csv", ["arrival_s", "origin", "e2e_s"],
             ([fmt_us(s.arrival), s.origin, fmt_us(s.e2e)] for s in self.delays))
        emit("messages.csv", ["window_start_s", "node", "rx", "tx"],
             ([fmt_us(w.window_start), w.node, w.rx, w.tx] for w in self.message_counts()))
        report = self.energy_report()
        emit("energy.csv", ["node", "alpha", "beta", "gamma_fwd", "delta", "energy_units"],
             ([n, c.alpha, c.beta, c.gamma_fwd, c.delta, report.per_node[n]]
              for n, c in sorted(self.energy.items())))
        emit("plan_history.csv", ["time_s", "node", "gamma"],
             ([fmt_us(t), n, g] for t, plan in self.plans for n, g in plan.gamma.items()))
        return written
