"""Exception types shared across the package."""

from __future__ import annotations


class UcactusError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(UcactusError):
    """Raised when an input graph or instance violates a structural contract."""


class NotConnected(ValidationError):
    """The input graph is not connected."""


class SharedCycleEdge(ValidationError):
    """Two cycles share an edge, so the graph is not a cactus."""


class NonPositiveEdgeLength(ValidationError):
    """An edge has zero or negative length."""


class InvalidPoint(ValidationError):
    """A point does not lie on the edge it claims to."""


class FormatError(UcactusError):
    """Raised when an instance file cannot be parsed."""


class InfeasibleParams(UcactusError):
    """Raised when generator parameters cannot produce a valid instance."""


class TooLargeForOracle(UcactusError):
    """Raised when an instance exceeds the brute-force oracle size guards."""


class InternalInvariantError(UcactusError):
    """A solver invariant failed; indicates a bug, not bad input."""
