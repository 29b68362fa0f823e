"""Exception types raised by nliouville."""

__all__ = ["NLiouvilleError", "DomainError", "SolverError", "InsufficientSpanError"]


class NLiouvilleError(Exception):
    """Base class for all package errors."""


class DomainError(NLiouvilleError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class InsufficientSpanError(DomainError):
    """A profile grid is too short for the requested extrapolation."""


class SolverError(NLiouvilleError, RuntimeError):
    """A numerical solver failed; ``last_r`` is the last radius reached, if known."""

    def __init__(self, message, last_r=None):
        super().__init__(message)
        self.last_r = last_r
