"""Exception types shared across the package."""


class QDephaseError(Exception):
    """Base class for all package-specific errors."""


class DomainError(QDephaseError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConvergenceError(QDephaseError, RuntimeError):
    """A quadrature routine could not meet the requested tolerance.

    The message reports the achieved error estimate so callers can decide
    whether to loosen settings or switch backend.
    """


class PhysicalityError(QDephaseError, ValueError):
    """A state or factor violates a physical bound (positivity, |A| <= 1, ...)."""


class NoBracketError(QDephaseError, RuntimeError):
    """A root bracket does not straddle a sign change (e.g. empty gain region)."""
