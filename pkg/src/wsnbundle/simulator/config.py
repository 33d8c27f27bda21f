from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from ..delay import ServiceDelayParams
from ..errors import ConfigError, TopologyError
from ..messages import MAX_ENTRIES
from ..model import US_PER_S, EnergyParams, NodeId, RequirementSet, Topology, validate_topology
from ..sync import AHTS_TABLE, AccuracyTable


class BundlingMode(str, Enum):
    ALL_DATA = "all_data"
    SELF_DATA = "self_data"
    NONE = "none"


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything one simulation run depends on; ``run`` is a pure function of it.

    ``schedule`` holds ``(activation_time, RequirementSet)`` pairs. Before the
    first activation the head has no requirement and nodes keep
    ``initial_plan``.
    """

    edges: tuple[tuple[NodeId, NodeId], ...]
    schedule: tuple[tuple[int, RequirementSet], ...]
    duration: int
    i_meas: int = US_PER_S
    bundling_mode: BundlingMode = BundlingMode.ALL_DATA
    energy: EnergyParams = EnergyParams()
    service: ServiceDelayParams = ServiceDelayParams()
    drifts_ppm: Mapping[NodeId, Fraction] = field(default_factory=dict)
    seed: int = 0
    initial_plan: int | None = None
    table: AccuracyTable = AHTS_TABLE
    tick: int = 1
    d_prop: int = 0
    window: int = 10 * US_PER_S

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        object.__setattr__(self, "schedule", tuple(self.schedule))
        object.__setattr__(self, "bundling_mode", BundlingMode(self.bundling_mode))
        object.__setattr__(
            self, "drifts_ppm", {int(k): Fraction(v) for k, v in dict(self.drifts_ppm).items()}
        )
        self.validate()

    @property
    def topology(self) -> Topology:
        return validate_topology(self.edges)

    @property
    def start_gamma(self) -> int:
        if self.initial_plan is not None:
            return self.initial_plan
        return self.schedule[0][1].chi_max if self.schedule else 1

    def validate(self) -> None:
        if self.duration <= 0:
            raise ConfigError("must be positive", "duration")
        if self.i_meas <= 0:
            raise ConfigError("must be positive", "i_meas")
        if self.tick <= 0:
            raise ConfigError("must be positive", "tick")
        if self.d_prop < 0:
            raise ConfigError("must be non-negative", "d_prop")
        if self.window <= 0:
            raise ConfigError("must be positive", "window")
        try:
            topo = validate_topology(self.edges)
        except TopologyError as exc:
            raise ConfigError(str(exc), "topology") from exc
        times = [t for t, _ in self.schedule]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ConfigError("activation times must be strictly increasing", "requirement_schedule")
        if any(t < 0 for t in times):
            raise ConfigError("activation times must be non-negative", "requirement_schedule")
        for node, drift in self.drifts_ppm.items():
            if node not in topo:
                raise ConfigError(f"node {node} is not in the topology", "drifts_ppm")
            if abs(drift) > 200:
                raise ConfigError(f"node {node}: |drift| exceeds 200 ppm", "drifts_ppm")
        if self.start_gamma < 1:
            raise ConfigError("must be >= 1", "initial_plan")

        # a gateway's bundle may hold entries from all 1 + lambda streams
        widest = 1 + max(topo.offspring.values())
        gammas = [self.start_gamma] + [req.chi_max for _, req in self.schedule]
        if self.bundling_mode is not BundlingMode.NONE and max(gammas) * widest > MAX_ENTRIES:
            raise ConfigError(
                f"bundling number {max(gammas)} x {widest} streams exceeds "
                f"{MAX_ENTRIES} entries per message",
                "chi_max",
            )
        for _, req in self.schedule:
            if req.i_meas != self.i_meas:
                raise ConfigError("requirement i_meas differs from the scenario i_meas", "i_meas")
