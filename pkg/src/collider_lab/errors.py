"""Exception hierarchy.

Every failure mode surfaced by the public API is a typed exception rooted at
:class:`ColliderLabError`.  Numeric code never returns NaN or infinity to
signal a problem; undefined quantities raise instead.
"""


class ColliderLabError(Exception):
    """Base class for all package errors."""


class DomainError(ColliderLabError, ValueError):
    """An input is outside the mathematical domain (non-finite, |r| > 1, ...)."""


class RangeError(ColliderLabError, ValueError):
    """An input is outside the supported numeric range (|alpha| > 8)."""


class ValidationError(ColliderLabError, ValueError):
    """A scenario violates its feasibility constraints.

    Carries the violation list so callers can report every failed constraint.
    """

    def __init__(self, message: str, violations: tuple = ()):
        super().__init__(message)
        self.violations = violations


class RealizabilityError(ColliderLabError, ValueError):
    """A scenario admits no unit-variance Gaussian realization.

    The closed-form algebra still evaluates at such points (sweeps include
    them); drawing samples or building the structural model does not.
    """


class UndefinedEstimatorError(ColliderLabError, ArithmeticError):
    """The requested estimand is undefined (zero denominator, singular Gram)."""


class ParseError(ColliderLabError, ValueError):
    """A scenario file or model description failed to parse.

    ``line`` is the 1-based line number when known.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class EmptyRegionError(ColliderLabError):
    """A region query found no feasible grid points."""


class SimulationError(ColliderLabError):
    """Simulation could not produce an estimate (singular design after retries)."""
