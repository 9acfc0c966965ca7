"""
Exceptions raised by the computational engine.

Every engine error derives from LabError so callers (the CLI in particular) can
tell a violated precondition apart from an internal failure. Audits never raise
for a violated property; they return Finding records instead.
"""


class LabError(ValueError):
    """Base exception for engine precondition failures."""

    def __init__(self, message: str):
        self.message = message
        super().__init__(self.message)


class DomainError(LabError):
    """An argument lies outside the domain of the operation."""


class IndexOutOfRangeError(LabError, IndexError):
    """An index into a word is out of range."""


class TailUndefinedError(LabError):
    """The expansion terminates before the requested tail exists."""


class MembershipError(LabError):
    """A word is not admissible for the schedule."""


class ScheduleError(LabError):
    """A schedule produced an empty or inconsistent quotient range."""


class NoSiblingError(LabError):
    """A fundamental interval has no same-order neighbour on either side."""


class InvalidParameterError(LabError):
    """Construction parameters are out of range."""


class CombinatorialExplosionError(LabError):
    """An enumeration exceeds its budget."""


class NoRootError(LabError):
    """The pressure equation has no root for the given parameters."""


class MissingSolutionError(LabError):
    """A pressure solution does not match the schedule it is used with."""


class InsufficientDataError(LabError):
    """Too few samples or levels for a regression."""


class SandwichUnsatisfiableError(ScheduleError):
    """No prefix length satisfies q_{n-2} <= Q^(1-delta) <= 2M q_{n-2}."""

    def __init__(self, message: str, q_value: int):
        self.q_value = q_value
        super().__init__(message)
