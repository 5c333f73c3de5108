"""Best L1 approximation of single-jump functions.

Computes, characterizes and verifies best L1 approximants of Heaviside-type
functions in polynomial and Hermite-spline spaces, built around symmetric
canonical sign-change points with a forced change at the jump.
"""

from .approx import (
    Approximant,
    ApproximationResult,
    best_l1_approximation,
    interpolate_at_canonical,
    residual_sign_pattern,
)
from .canonical import (
    CanonicalPointSet,
    CanonicalSolveResult,
    SignChangeFunction,
    UniquenessReport,
    chebyshev_u,
    oscillating_moment,
    polynomial_canonical_points,
    solve_canonical_points,
    verify_uniqueness,
)
from .errors import (
    DomainError,
    ExpressionError,
    JobSpecError,
    L1HeavisideError,
    NoConvergence,
    NonSquareSystem,
    OddDimension,
    OracleFailure,
    OrderingViolation,
    SingularCollocation,
    UniquenessCheckUnavailable,
)
from .functions import (
    Branch,
    HeavisideTypeFunction,
    Measure,
    NormalizedProblem,
    Transform,
    heaviside,
    normalize,
)
from .spaces import (
    BasisFunction,
    BasisSpace,
    HermiteSplineSpace,
    KnotVector,
    LinearCombination,
    ParitySplit,
    SpaceKind,
    exact_moment,
    hermite_spline_space,
    parity_split,
    polynomial_space,
    space_from_description,
    symmetric_even_basis,
)
from .verify import (
    CharacterizationReport,
    OptimalityReport,
    characterization_check,
    gibbs_metrics,
    grid_oracle,
    l1_error,
    optimality_report,
)

__version__ = "0.1.0"

__all__ = [
    "Approximant",
    "ApproximationResult",
    "BasisFunction",
    "BasisSpace",
    "Branch",
    "CanonicalPointSet",
    "CanonicalSolveResult",
    "CharacterizationReport",
    "DomainError",
    "ExpressionError",
    "HeavisideTypeFunction",
    "HermiteSplineSpace",
    "JobSpecError",
    "KnotVector",
    "L1HeavisideError",
    "LinearCombination",
    "Measure",
    "NoConvergence",
    "NonSquareSystem",
    "NormalizedProblem",
    "OddDimension",
    "OptimalityReport",
    "OracleFailure",
    "OrderingViolation",
    "ParitySplit",
    "SignChangeFunction",
    "SingularCollocation",
    "SpaceKind",
    "Transform",
    "UniquenessCheckUnavailable",
    "UniquenessReport",
    "best_l1_approximation",
    "characterization_check",
    "chebyshev_u",
    "exact_moment",
    "gibbs_metrics",
    "grid_oracle",
    "heaviside",
    "hermite_spline_space",
    "interpolate_at_canonical",
    "l1_error",
    "normalize",
    "optimality_report",
    "oscillating_moment",
    "parity_split",
    "polynomial_canonical_points",
    "polynomial_space",
    "residual_sign_pattern",
    "solve_canonical_points",
    "space_from_description",
    "symmetric_even_basis",
    "verify_uniqueness",
]
