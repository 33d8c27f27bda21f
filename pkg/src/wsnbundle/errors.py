"""Exception hierarchy shared across the package."""

from __future__ import annotations


class BundleError(Exception):
    """Base class for all package errors."""


class TopologyError(BundleError, ValueError):
    """Edge list does not describe a tree rooted at the head."""

    def __init__(self, message: str, nodes: tuple[int, ...] = ()):
        super().__init__(message)
        self.nodes = nodes


class CycleDetected(TopologyError):
    pass


class MultipleParents(TopologyError):
    pass


class DisconnectedNode(TopologyError):
    pass


class MissingHead(TopologyError):
    pass


class UnknownNode(BundleError, KeyError):
    def __init__(self, node: int):
        super().__init__(node)
        self.node = node

    def __str__(self) -> str:
        return f"unknown node {self.node}"


class IncompletePlan(BundleError, ValueError):
    def __init__(self, missing: tuple[int, ...]):
        super().__init__(f"plan has no bundling number for node(s) {list(missing)}")
        self.missing = missing


class UnsatisfiableAccuracy(BundleError, ValueError):
    pass


class InfeasibleBounds(BundleError, ValueError):
    """chi_min everywhere already breaks some node's delay bound."""

    def __init__(self, message: str, nodes: tuple[int, ...]):
        super().__init__(message)
        self.nodes = nodes


class InstanceTooLarge(BundleError, ValueError):
    pass


class DegenerateInterval(BundleError, ValueError):
    pass


class MissingEstimate(BundleError, LookupError):
    def __init__(self, node: int):
        super().__init__(f"no skew estimate for node {node} yet")
        self.node = node


class ConfigError(BundleError, ValueError):
    """Scenario file or config rejected; ``field`` names the offending key."""

    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        where = f"{field}: " if field else ""
        if line is not None:
            where = f"line {line}: {where}"
        super().__init__(where + message)
        self.field = field
        self.line = line


class WireFormatError(BundleError, ValueError):
    pass
