"""Link and path delay model for bundling sensor networks.

All functions are pure. Inputs are integer microseconds; outputs that can be
fractional (bundling delays) are exact ``Fraction`` microseconds, so the
optimizer's constraint rows and this module agree bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import UnknownNode
from .model import BundlingPlan, NodeId, Topology, round_half_up

MS = 1000


class DelayMode(str, Enum):
    EXACT = "exact"
    APPROXIMATE = "approximate"


@dataclass(frozen=True)
class ServiceDelayParams:
    """TinyOS-style per-hop service components, in microseconds."""

    d_spi: int = 1 * MS
    d_mac: int = 4 * MS
    d_frame: int = 4 * MS
    d_ack: int = 1 * MS
    d_wait_ack: int = 2 * MS
    t_retry: int = 5 * MS
    n_max: int = 5

    def __post_init__(self) -> None:
        for name in ("d_spi", "d_mac", "d_frame", "d_ack", "d_wait_ack", "t_retry"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")

    @classmethod
    def from_ms(cls, d_spi, d_mac, d_frame, d_ack, d_wait_ack=2, t_retry=5, n_max=5):
        ms = (d_spi, d_mac, d_frame, d_ack, d_wait_ack, t_retry)
        return cls(*(_ms_to_us(v) for v in ms), n_max=n_max)


def _ms_to_us(value) -> int:
    return round_half_up(Fraction(str(value)) * MS)


@dataclass(frozen=True)
class LinkDelayBreakdown:
    d_prop: Fraction
    d_serv: Fraction
    d_bund: Fraction
    total: Fraction


def service_delay_full(p: ServiceDelayParams, n_try: int) -> int:
    """Service time with retransmissions; attempts beyond ``n_max`` fail."""
    if n_try < 1:
        raise ValueError("n_try must be >= 1")
    retry = p.t_retry + p.d_frame + p.d_wait_ack
    if n_try <= p.n_max:
        return p.d_spi + (p.d_mac + p.d_frame + p.d_ack) + (n_try - 1) * retry
    return p.d_spi + (p.d_mac + p.d_frame + p.d_wait_ack) + (p.n_max - 1) * retry


def service_delay_simplified(p: ServiceDelayParams) -> int:
    return p.d_spi + p.d_mac + p.d_frame + p.d_ack


def bundling_delay(gamma: int, lam: int, i_meas: int) -> Fraction:
    """Time to fill a bundle of ``gamma`` entries from ``1 + lam`` unit-rate streams."""
    if gamma < 1:
        raise ValueError("gamma must be >= 1")
    if lam < 0:
        raise ValueError("lambda must be >= 0")
    if i_meas <= 0:
        raise ValueError("i_meas must be positive")
    return Fraction(gamma, 1 + lam) * i_meas


def link_delay(d_prop, d_serv, d_bund, mode: DelayMode | str = DelayMode.EXACT) -> LinkDelayBreakdown:
    mode = DelayMode(mode)
    d_prop, d_serv, d_bund = Fraction(d_prop), Fraction(d_serv), Fraction(d_bund)
    if min(d_prop, d_serv, d_bund) < 0:
        raise ValueError("delays must be non-negative")
    total = d_prop + d_serv + d_bund if mode is DelayMode.EXACT else d_bund
    return LinkDelayBreakdown(d_prop, d_serv, d_bund, total)


def e2e_delay_model(
    node: NodeId,
    plan: BundlingPlan,
    topology: Topology,
    i_meas: int,
    mode: DelayMode | str = DelayMode.APPROXIMATE,
    service: ServiceDelayParams | None = None,
    d_prop: int = 0,
) -> Fraction:
    """Modelled end-to-end delay of ``node``'s measurements.

    Each hop on the path contributes the bundling delay of the node that
    transmits on that hop (not ``node``'s own delay repeated per hop).
    """
    if node not in topology:
        raise UnknownNode(node)
    path = topology.path(node)
    plan.require(path)
    service = service or ServiceDelayParams()
    serv = service_delay_simplified(service)
    total = Fraction(0)
    for hop in path:
        d_bund = bundling_delay(plan[hop], topology.offspring[hop], i_meas)
        total += link_delay(d_prop, serv, d_bund, mode).total
    return total
