"""Exception types shared across the package."""

from __future__ import annotations


class UelError(Exception):
    """Base class for all package-specific errors."""


class BoundExceededError(UelError):
    """An enumeration exceeded its configured bound.

    ``partial_count`` is the number of items produced before the bound was
    hit; ``case_id`` is set when the enumeration belonged to a specific trace.
    """

    def __init__(self, message: str, partial_count: int, case_id: str | None = None):
        super().__init__(message)
        self.partial_count = partial_count
        self.case_id = case_id


class StateLimitError(UelError):
    """A state-space search exceeded its configured state budget."""

    def __init__(self, message: str, states_explored: int):
        super().__init__(message)
        self.states_explored = states_explored


class CycleError(UelError):
    """A graph expected to be acyclic contains a cycle.

    ``witness`` is a list of node ids forming one cycle.
    """

    def __init__(self, message: str, witness: list):
        super().__init__(message)
        self.witness = witness


class ModelError(UelError):
    """A reference model is unusable (e.g. its final marking is unreachable)."""


class NonProbabilizableError(UelError):
    """A probability was requested on data carrying non-stochastic uncertainty.

    ``attribute`` names the offending attribute (timestamp, activity or
    indeterminacy) and ``event_id`` the event carrying it.
    """

    def __init__(self, attribute: str, event_id: str):
        super().__init__(
            f"event {event_id!r}: attribute {attribute!r} carries non-stochastic "
            "uncertainty; enable uniform_defaults to analyze it probabilistically"
        )
        self.attribute = attribute
        self.event_id = event_id


class InjectionError(UelError):
    """Uncertainty injection was asked for more than the log can provide."""
