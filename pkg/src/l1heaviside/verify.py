"""Independent optimality verification.

Nothing here trusts the canonical-point construction: the L1 error is
integrated directly, the characterization certificate re-derives the signed
moments from the actual residual sign pattern, the grid oracle minimizes the
discretized L1 objective as a linear program over plain grid samples, and
the Gibbs metrics measure the near-jump overshoot of whatever approximant
they are handed.  Agreement between these routes and the construction is
genuine cross-validation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sparse
from scipy.optimize import linprog, minimize_scalar

from .approx import residual_sign_pattern
from .errors import DomainError, OracleFailure
from .functions import NormalizedProblem, normalize
from .spaces import BasisSpace, SpaceKind, monomial, exact_moment

_ZERO_PROBE_COUNT = 32    # probes per segment when estimating the zero set
_ZERO_LEVEL = 1e-12       # |residual| below this counts as "vanishes here"

_ONE = monomial(0)


def _as_problem(f) -> NormalizedProblem:
    return f if isinstance(f, NormalizedProblem) else normalize(f)


class _SidedResidual:
    """f - g restricted to one side of the jump, with exact antiderivative
    when both parts carry one (then segment integrals are closed-form)."""

    def __init__(self, branch, g):
        self.branch = branch
        self.g = g

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.asarray(self.branch(x), dtype=float) - np.asarray(self.g(x), dtype=float)

    @property
    def antiderivative(self):
        branch_anti = getattr(self.branch, "antiderivative", None)
        g_anti = getattr(self.g, "antiderivative", None)
        if branch_anti is None or g_anti is None:
            return None
        return lambda x: np.asarray(branch_anti(x), dtype=float) - np.asarray(g_anti(x), dtype=float)

    @property
    def breakpoints(self):
        return getattr(self.g, "breakpoints", ())


class _Magnitude:
    """|g| wrapper for quadrature on zero-set segments."""

    def __init__(self, g):
        self.g = g
        self.breakpoints = getattr(g, "breakpoints", ())

    def __call__(self, x):
        return np.abs(np.asarray(self.g(x), dtype=float))


def _segment_edges(problem, g, roots) -> np.ndarray:
    cuts = {-1.0, 0.0, 1.0}
    cuts.update(float(r) for r in np.asarray(roots, dtype=float))
    cuts.update(b for b in getattr(g, "breakpoints", ()) if -1.0 < b < 1.0)
    return np.asarray(sorted(cuts), dtype=float)


def l1_error(f, g, roots=None) -> float:
    """Weighted L1 norm of f - g over [-1, 1].

    Subdivides at the jump, at every breakpoint of g, and at every detected
    residual sign change, so each segment is single-signed and smooth; exact
    antiderivatives are used segment-wise when available, adaptive quadrature
    otherwise.  Absolute accuracy ~1e-10.
    """
    problem = _as_problem(f)
    if roots is None:
        roots = residual_sign_pattern(problem, g)
    edges = _segment_edges(problem, g, roots)
    left = _SidedResidual(problem.function.left_branch, g)
    right = _SidedResidual(problem.function.right_branch, g)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        piece = left if b <= 0.0 else right
        total += abs(exact_moment(piece, a, b, problem.measure))
    return float(total)


@dataclass(frozen=True)
class CharacterizationReport:
    """Signed basis moments of the residual sign pattern, plus the zero-set
    bookkeeping that selects between the equality and inequality regimes."""

    moments: tuple[float, ...]
    zero_set_bounds: tuple[float, ...]
    labels: tuple[str, ...]
    characterization_max: float
    zero_set_measure_estimate: float
    certified: bool
    inequality_satisfied: bool


def characterization_check(f, g, space: BasisSpace | None = None, roots=None) -> CharacterizationReport:
    """Evaluate the optimality certificate for g against a basis.

    Computes m_j = integral of sign(f - g) phi_j dnu by exact segment moments
    between consecutive residual roots.  Segments where the residual vanishes
    uniformly (probed pointwise) are excluded from the signed moments and
    instead contribute integral of |phi_j| to the allowed slack; with an
    (estimated) measure-zero zero set the certificate is simply
    max_j |m_j| < 1e-8.
    """
    problem = _as_problem(f)
    if space is None:
        space = g.space
    if roots is None:
        roots = residual_sign_pattern(problem, g)
    edges = _segment_edges(problem, g, roots)
    fn = problem.function

    moments = np.zeros(space.dimension)
    slack = np.zeros(space.dimension)
    zero_measure = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        probes = a + (b - a) * (np.arange(_ZERO_PROBE_COUNT) + 0.5) / _ZERO_PROBE_COUNT
        res = np.asarray(fn(probes), dtype=float) - np.asarray(g(probes), dtype=float)
        if np.max(np.abs(res)) < _ZERO_LEVEL:
            zero_measure += exact_moment(_ONE, a, b, problem.measure)
            for j, phi in enumerate(space.functions):
                slack[j] += exact_moment(_Magnitude(phi), a, b, problem.measure)
            continue
        sign = 1.0 if np.median(res) > 0.0 else -1.0
        for j, phi in enumerate(space.functions):
            moments[j] += sign * exact_moment(phi, a, b, problem.measure)

    cmax = float(np.max(np.abs(moments))) if moments.size else 0.0
    certified = zero_measure < 1e-10 and cmax < 1e-8
    inequality = bool(np.all(np.abs(moments) <= slack + 1e-8))
    return CharacterizationReport(
        moments=tuple(float(v) for v in moments),
        zero_set_bounds=tuple(float(v) for v in slack),
        labels=tuple(phi.label for phi in space.functions),
        characterization_max=cmax,
        zero_set_measure_estimate=float(zero_measure),
        certified=certified,
        inequality_satisfied=inequality,
    )


def grid_oracle(f, space: BasisSpace, grid: int) -> np.ndarray:
    """Brute-force discretized L1 minimizer, independent of canonical points.

    Minimizes sum_k w_k |f(x_k) - sum_j c_j phi_j(x_k)| over the coefficients
    via the standard slack-variable linear program.  The grid is uniform with
    nodes offset half a cell so none lands on the jump; w_k are trapezoidal
    weights times the measure weight.  Deterministic given the grid.
    """
    problem = _as_problem(f)
    if grid < 50 * space.dimension:
        raise DomainError(f"oracle grid {grid} too coarse; need at least {50 * space.dimension}")
    grid = int(grid) + int(grid) % 2  # even count keeps nodes off x = 0

    h = 2.0 / grid
    xs = -1.0 + (np.arange(grid) + 0.5) * h
    weights = np.full(grid, h)
    weights[0] = weights[-1] = h / 2.0
    weights = weights * np.asarray(problem.measure.weight_at(xs), dtype=float)

    matrix = space.evaluate_matrix(xs)
    values = np.asarray(problem.function(xs), dtype=float)
    n = space.dimension

    # variables [c, t]: minimize w.t subject to +-(A c - y) <= t
    a_sp = sparse.csr_matrix(matrix)
    eye = sparse.identity(grid, format="csr")
    constraints = sparse.vstack([sparse.hstack([a_sp, -eye]), sparse.hstack([-a_sp, -eye])], format="csr")
    rhs = np.concatenate([values, -values])
    cost = np.concatenate([np.zeros(n), weights])
    bounds = [(None, None)] * n + [(0.0, None)] * grid

    result = linprog(cost, A_ub=constraints, b_ub=rhs, bounds=bounds, method="highs")
    if not result.success:
        raise OracleFailure(f"oracle linear program failed: {result.message}")
    return np.asarray(result.x[:n], dtype=float)


def _refine_extremum(g, lo: float, hi: float, maximize: bool) -> tuple[float, float]:
    xs = np.linspace(lo, hi, 512)
    vals = np.asarray(g(xs), dtype=float)
    idx = int(np.argmax(vals)) if maximize else int(np.argmin(vals))
    a = xs[max(idx - 1, 0)]
    b = xs[min(idx + 1, len(xs) - 1)]
    sign = -1.0 if maximize else 1.0
    res = minimize_scalar(
        lambda x: sign * float(g(x)), bounds=(a, b), method="bounded",
        options={"xatol": 1e-10},
    )
    return float(res.x), float(sign * res.fun)


def gibbs_metrics(f, g, window: float = 0.5) -> tuple[float, float, float]:
    """Near-jump overshoot metrics: (overshoot, undershoot, location).

    The high side is the side of the jump with the larger one-sided limit.
    Overshoot is how far g exceeds that limit within the window on the high
    side; undershoot is how far g drops below the other limit on the low
    side; both are clamped at 0.  The returned location is the refined
    extremum (of the two) nearest the jump.
    """
    if window <= 0.0:
        raise DomainError("window must be positive")
    problem = _as_problem(f)
    fn = problem.function
    left_limit = fn.left_limit
    right_limit = fn.right_limit
    window = min(float(window), 1.0)

    if right_limit >= left_limit:
        high, low = right_limit, left_limit
        high_window, low_window = (1e-12, window), (-window, -1e-12)
    else:
        high, low = left_limit, right_limit
        high_window, low_window = (-window, -1e-12), (1e-12, window)

    x_high, g_high = _refine_extremum(g, *high_window, maximize=True)
    x_low, g_low = _refine_extremum(g, *low_window, maximize=False)
    overshoot = max(0.0, g_high - high)
    undershoot = max(0.0, low - g_low)
    location = x_high if abs(x_high) <= abs(x_low) else x_low
    return overshoot, undershoot, float(location)


@dataclass(frozen=True)
class OptimalityReport:
    """Everything the verification pass can say about one approximant."""

    l1_error: float
    characterization_max: float
    zero_set_measure_estimate: float
    oracle_gap: float | None
    gibbs_overshoot: float
    gibbs_undershoot: float
    gibbs_location: float
    moments: tuple[float, ...]
    moment_labels: tuple[str, ...]
    optimality: str
    oracle_l1_error: float | None = None

    def to_json_dict(self) -> dict:
        return {
            "l1_error": self.l1_error,
            "characterization_max": self.characterization_max,
            "zero_set_measure_estimate": self.zero_set_measure_estimate,
            "oracle_gap": self.oracle_gap,
            "oracle_l1_error": self.oracle_l1_error,
            "gibbs_overshoot": self.gibbs_overshoot,
            "gibbs_undershoot": self.gibbs_undershoot,
            "gibbs_location": self.gibbs_location,
            "optimality": self.optimality,
            "moments": {label: value for label, value in zip(self.moment_labels, self.moments)},
        }


def optimality_report(
    f, g, space: BasisSpace | None = None, oracle_grid: int | None = None,
    gibbs_window: float = 0.5,
) -> OptimalityReport:
    """Run the full verification battery against one candidate approximant."""
    problem = _as_problem(f)
    if space is None:
        space = g.space
    roots = residual_sign_pattern(problem, g)
    error = l1_error(problem, g, roots=roots)
    character = characterization_check(problem, g, space=space, roots=roots)
    overshoot, undershoot, location = gibbs_metrics(problem, g, gibbs_window)

    oracle_gap = None
    oracle_error = None
    if oracle_grid is not None:
        coefficients = grid_oracle(problem, space, oracle_grid)
        oracle_error = l1_error(problem, space.element(coefficients))
        oracle_gap = error - oracle_error

    if character.certified:
        wording = "certified" if space.kind is SpaceKind.CHEBYSHEV else "verified-numerically"
    elif character.inequality_satisfied and character.zero_set_measure_estimate > 1e-10:
        wording = "verified-numerically"
    else:
        wording = "not-verified"

    return OptimalityReport(
        l1_error=error,
        characterization_max=character.characterization_max,
        zero_set_measure_estimate=character.zero_set_measure_estimate,
        oracle_gap=oracle_gap,
        gibbs_overshoot=overshoot,
        gibbs_undershoot=undershoot,
        gibbs_location=location,
        moments=character.moments,
        moment_labels=character.labels,
        optimality=wording,
        oracle_l1_error=oracle_error,
    )
