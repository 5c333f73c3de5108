"""Exception hierarchy shared across the package."""


class L1HeavisideError(Exception):
    """Base class for all package errors."""


class DomainError(L1HeavisideError, ValueError):
    """A point or interval lies outside the supported domain."""


class ExpressionError(L1HeavisideError, ValueError):
    """A function expression could not be parsed or contains forbidden syntax."""


class JobSpecError(L1HeavisideError, ValueError):
    """A job description JSON is malformed or violates its invariants."""


class NonSquareSystem(L1HeavisideError):
    """The even subspace does not have dimension ceil(n/2), so the canonical
    point system is not square and the symmetric solver refuses to run."""


class NoConvergence(L1HeavisideError):
    """The canonical point iteration failed to converge after all restarts."""


class OrderingViolation(L1HeavisideError):
    """An iterate left the ordered simplex in (0, 1) and projection failed."""


class UniquenessCheckUnavailable(L1HeavisideError):
    """Uniqueness corroboration is only supported for Chebyshev-kind spaces."""


class OddDimension(L1HeavisideError):
    """Interpolation at canonical points needs an even-dimensional space; an
    odd dimension leaves the collocation system underdetermined."""


class SingularCollocation(L1HeavisideError):
    """The collocation matrix at the canonical points is rank deficient, so
    interpolation does not determine a unique element of the space."""


class OracleFailure(L1HeavisideError):
    """The discretized L1 minimization could not be solved; the problem is
    bounded below by zero, so this signals a bug or degenerate input."""
