from __future__ import annotations

from dataclasses import dataclass

from ..model import NodeId
from .calc import mean_window_total
from .trace import TraceSet


@dataclass(frozen=True)
class Segment:
    """Samples judged against one requirement, from settling until the next activation."""

    start: int
    end: int
    settled_from: int | None
    bound: int | None
    samples: int
    violations: int
    max_delay: int | None

    @property
    def compliance(self) -> float:
        return 1.0 - self.violations / self.samples if self.samples else 1.0


def segments(trace: TraceSet) -> list[Segment]:
    """Per-requirement steady-state statistics.

    A segment settles once the last parameter update issued for it has been
    applied and one full delay budget has elapsed, so every sample counted
    was measured under the new plan along its entire path.
    """
    out = []
    reqs = trace.requirements
    for k, (start, _req, bound) in enumerate(reqs):
        end = reqs[k + 1][0] if k + 1 < len(reqs) else trace.duration
        applied = [t for t, _, _ in trace.applied if start <= t < end]
        if bound is None or not applied:
            out.append(Segment(start, end, None, bound, 0, 0, None))
            continue
        settled = max(applied) + bound
        sel = [d.e2e for d in trace.delays if settled <= d.t_meas < end]
        out.append(Segment(
            start, end, settled, bound, len(sel),
            sum(e > bound for e in sel), max(sel) if sel else None,
        ))
    return out


def pre_requirement_max(trace: TraceSet) -> int | None:
    """Largest delay measured before the first requirement took effect."""
    first = trace.requirements[0][0] if trace.requirements else trace.duration
    sel = [d.e2e for d in trace.delays if d.t_meas < first]
    return max(sel) if sel else None


def mean_messages(trace: TraceSet, nodes: tuple[NodeId, ...] | None = None) -> float:
    return mean_window_total(trace.message_counts(), nodes or trace.sensors)


def summary(trace: TraceSet, baseline: TraceSet | None = None) -> dict[str, object]:
    """Flat key/value run summary; ``baseline`` is an unbundled run of the same scenario."""
    out: dict[str, object] = {
        "samples": len(trace.delays),
        "energy_total": trace.energy_report().total,
        "mean_rx_tx_per_window": round(mean_messages(trace), 6),
        "pre_requirement_max_s": _s(pre_requirement_max(trace)),
        "notes": len(trace.notes),
    }
    for k, seg in enumerate(segments(trace)):
        out[f"segment{k}_bound_s"] = _s(seg.bound)
        out[f"segment{k}_samples"] = seg.samples
        out[f"segment{k}_compliance"] = round(seg.compliance, 6)
        out[f"segment{k}_violation_rate"] = round(1 - seg.compliance, 6)
        out[f"segment{k}_max_s"] = _s(seg.max_delay)
    if baseline is not None:
        out["baseline_energy_total"] = baseline.energy_report().total
        out["baseline_mean_rx_tx_per_window"] = round(mean_messages(baseline), 6)
    return out


def _s(us: int | None) -> str:
    return "" if us is None else f"{us / 1e6:.6f}"
