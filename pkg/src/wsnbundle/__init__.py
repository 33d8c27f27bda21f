"""Optimal message bundling under end-to-end delay and sync-accuracy constraints."""

from .model import (
    HEAD,
    BundlingPlan,
    EnergyCounts,
    EnergyParams,
    RequirementSet,
    Topology,
    offspring_count,
    validate_topology,
)

__version__ = "0.1.0"

__all__ = [
    "HEAD",
    "BundlingPlan",
    "EnergyCounts",
    "EnergyParams",
    "RequirementSet",
    "Topology",
    "offspring_count",
    "validate_topology",
]
