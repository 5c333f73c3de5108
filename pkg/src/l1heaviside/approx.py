"""Best L1 approximants by interpolation at canonical points.

Once the canonical points are known, the best approximant of a single-jump
function is pinned down by Lagrange interpolation at the 2m nonzero points
(the jump point itself is never a node).  The residual then alternates sign
exactly at the canonical partition; a scan for sign changes elsewhere is the
cheap first-line optimality check, with the full certificate delegated to
the verification module.
"""

from __future__ import annotations

import numpy as np

from .canonical import CanonicalPointSet, CanonicalSolveResult, solve_canonical_points
from .errors import DomainError, OddDimension, SingularCollocation
from .functions import HeavisideTypeFunction, NormalizedProblem, normalize
from .spaces import BasisSpace, LinearCombination, space_from_description

_COND_LIMIT = 1e13  # collocation condition beyond this is treated as singular


class Approximant:
    """Coefficients over a basis plus the interpolation diagnostics."""

    def __init__(self, space: BasisSpace, coefficients, canonical_points: CanonicalPointSet,
                 interpolation_residual: float, collocation_condition: float):
        self.space = space
        self.coefficients = np.asarray(coefficients, dtype=float)
        self.canonical_points = canonical_points
        self.interpolation_residual = float(interpolation_residual)
        self.collocation_condition = float(collocation_condition)
        self.element = LinearCombination(space, self.coefficients)

    def __call__(self, x):
        return self.element(x)

    @property
    def antiderivative(self):
        return self.element.antiderivative

    @property
    def breakpoints(self):
        return self.element.breakpoints

    def __repr__(self):
        return (
            f"Approximant({self.space.name!r}, m={self.canonical_points.m}, "
            f"interp_residual={self.interpolation_residual:.2e})"
        )


def interpolate_at_canonical(
    f, space: BasisSpace, points: CanonicalPointSet
) -> Approximant:
    """Solve the collocation system g(a_i) = f(a_i) over the nonzero points.

    Needs an even space dimension n = 2m so that the 2m nonzero symmetric
    points give a square system.  Dense LU with one step of iterative
    refinement; the condition number is recorded on the result.  A
    rank-deficient matrix (possible for splines when nodes cluster inside
    one knot interval) raises rather than returning a pseudo-solution.
    """
    n = space.dimension
    if n % 2 == 1:
        raise OddDimension(
            f"space dimension {n} is odd: interpolation at the {2 * (n // 2)} nonzero "
            "canonical points cannot determine a unique element"
        )
    if n != 2 * points.m:
        raise DomainError(
            f"need m = n/2 positive points for dimension {n}, got m = {points.m}"
        )
    target = f.function if isinstance(f, NormalizedProblem) else f
    pos = np.asarray(points.positive_points, dtype=float)
    nodes = np.concatenate((-pos[::-1], pos))
    matrix = space.evaluate_matrix(nodes)
    values = np.asarray(target(nodes), dtype=float)

    condition = float(np.linalg.cond(matrix))
    if not np.isfinite(condition) or condition > _COND_LIMIT:
        raise SingularCollocation(
            f"collocation matrix is numerically singular (cond ~ {condition:.2e})"
        )
    try:
        coeffs = np.linalg.solve(matrix, values)
        coeffs += np.linalg.solve(matrix, values - matrix @ coeffs)  # one refinement pass
    except np.linalg.LinAlgError as exc:
        raise SingularCollocation(f"collocation solve failed: {exc}") from None

    residual = float(np.max(np.abs(matrix @ coeffs - values)))
    scale = max(1.0, float(np.max(np.abs(values))))
    if residual > 1e-9 * scale:
        raise SingularCollocation(
            f"interpolation residual {residual:.2e} exceeds tolerance; "
            "nodes do not determine an element of this space"
        )
    return Approximant(space, coeffs, points, residual, condition)


def residual_sign_pattern(f: NormalizedProblem, g, grid_size: int = 0) -> np.ndarray:
    """Locate the sign changes of f - g on [-1, 1].

    Scans a uniform grid whose nodes avoid 0 and refines each bracketed
    crossing by bisection to 1e-12.  The cell straddling 0 is handled via
    one-sided branch limits, so a flip caused by the jump is reported as a
    change exactly at 0.
    """
    space = getattr(g, "space", None)
    minimum = 10 * (space.dimension if space is not None else 1)
    grid = max(int(grid_size), minimum, 512)

    fn = f.function if isinstance(f, NormalizedProblem) else f
    h = 2.0 / grid
    xs = -1.0 + (np.arange(grid) + 0.5) * h
    res = np.asarray(fn(xs), dtype=float) - np.asarray(g(xs), dtype=float)

    def residual_at(x):
        return float(fn(x)) - float(g(x))

    changes = []

    def bisect(lo, hi, flo):
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            fm = residual_at(mid)
            if fm == 0.0 or hi - lo < 1e-12:
                return mid
            if (flo < 0.0) != (fm < 0.0):
                hi = mid
            else:
                lo, flo = mid, fm
        return 0.5 * (lo + hi)

    g0 = float(g(0.0))
    left_limit = float(fn.left_branch(0.0)) - g0
    right_limit = float(fn.right_branch(0.0)) - g0

    for i in range(grid - 1):
        a, b = xs[i], xs[i + 1]
        ra, rb = res[i], res[i + 1]
        if a < 0.0 < b:
            # split the straddling cell at the jump
            if ra != 0.0 and left_limit != 0.0 and (ra < 0.0) != (left_limit < 0.0):
                changes.append(bisect(a, 0.0, ra))
            if left_limit != 0.0 and right_limit != 0.0 and (left_limit < 0.0) != (right_limit < 0.0):
                changes.append(0.0)
            if right_limit != 0.0 and rb != 0.0 and (right_limit < 0.0) != (rb < 0.0):
                changes.append(bisect(0.0, b, right_limit))
            continue
        if ra != 0.0 and rb != 0.0 and (ra < 0.0) != (rb < 0.0):
            changes.append(bisect(a, b, ra))

    changes.sort()
    deduped = []
    for c in changes:
        if not deduped or c - deduped[-1] > 1e-9:
            deduped.append(c)
    return np.asarray(deduped, dtype=float)


class ApproximationResult:
    """End-to-end pipeline output: approximant, solver data, residual flags."""

    def __init__(self, problem, space, solve, approximant, sign_changes, flags, diagnostics):
        self.problem = problem
        self.space = space
        self.solve = solve
        self.approximant = approximant
        self.sign_changes = np.asarray(sign_changes, dtype=float)
        self.flags = tuple(flags)
        self.diagnostics = dict(diagnostics)

    def to_json_dict(self) -> dict:
        return {
            "coefficients": [float(c) for c in self.approximant.coefficients],
            "canonical_points": list(self.approximant.canonical_points.full_points),
            "sign_changes": [float(c) for c in self.sign_changes],
            "flags": list(self.flags),
            "diagnostics": self.diagnostics,
        }


def best_l1_approximation(f, space_spec, grid_size: int = 0) -> ApproximationResult:
    """Full pipeline: normalize, solve canonical points, interpolate, check.

    ``space_spec`` is a BasisSpace or a JSON-style description dict.  The
    sign-pattern check is a warning channel: extra crossings away from the
    canonical partition flag the result for independent verification instead
    of failing it (legitimately optimal approximants of oscillating targets
    can have more crossings than the dimension).
    """
    problem = f if isinstance(f, NormalizedProblem) else normalize(f)
    space = space_spec if isinstance(space_spec, BasisSpace) else space_from_description(space_spec)

    solve = solve_canonical_points(space, problem.measure)
    approximant = interpolate_at_canonical(problem, space, solve.points)
    changes = residual_sign_pattern(problem, approximant, grid_size)

    full = np.asarray(solve.points.full_points, dtype=float)
    flags = []
    matched = (
        np.min(np.abs(changes[:, None] - full[None, :]), axis=1) < 1e-6
        if changes.size
        else np.zeros(0, dtype=bool)
    )
    if bool(np.any(~matched)) or changes.size > full.size:
        flags.append("sign-pattern-violation")
    has_zero = bool(changes.size and np.any(np.abs(changes) < 1e-12))
    if not has_zero:
        flags.append("no-jump-sign-change")
    if problem.function.is_degenerate:
        flags.append("degenerate-jump")
    if not problem.measure.is_symmetric:
        flags.append("asymmetric-weight")

    diagnostics = {
        "dimension": space.dimension,
        "even_dimension": space.even_dimension,
        "even_dimension_hypothesis": space.even_dimension == (space.dimension + 1) // 2,
        "expected_sign_changes": int(full.size),
        "observed_sign_changes": int(changes.size),
        "solver_iterations": solve.iterations,
        "solver_residual": solve.residual_inf_norm,
        "collocation_condition": approximant.collocation_condition,
        "interpolation_residual": approximant.interpolation_residual,
    }
    return ApproximationResult(problem, space, solve, approximant, changes, flags, diagnostics)
