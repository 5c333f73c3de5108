"""Symmetric canonical sign-change points.

The canonical point set {-a_m, .., -a_1, 0, a_1, .., a_m} is the place where
an alternating +-1 step function becomes orthogonal to the whole
approximation space.  A sign change at 0 is forced (the jump lives there);
the remaining points come in symmetric pairs, so with a symmetric measure
the even subspace is handled automatically and only the odd reductions of a
complement subspace yield equations: a square m-by-m system solved by damped
Newton with an analytic Jacobian.  For polynomial spaces the solution is
known in closed form through second-kind Chebyshev polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DomainError,
    NoConvergence,
    NonSquareSystem,
    OrderingViolation,
    UniquenessCheckUnavailable,
)
from .spaces import BasisSpace, SpaceKind, parity_split, exact_moment

_GAP = 1e-9          # minimal separation enforced between ordered points
_MOMENT_TOL = 1e-12  # convergence threshold on the moment residual


def chebyshev_u(degree: int, x):
    """Second-kind Chebyshev polynomial by the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    if degree < 0:
        raise DomainError("degree must be nonnegative")
    prev = np.ones_like(x)
    if degree == 0:
        return prev
    cur = 2.0 * x
    for _ in range(degree - 1):
        prev, cur = cur, 2.0 * x * cur - prev
    return cur


@dataclass(frozen=True)
class SignChangeFunction:
    """Alternating +-1 step function with ordered interior breakpoints."""

    breakpoints: tuple[float, ...]
    leading_sign: int = -1

    def __post_init__(self):
        if self.leading_sign not in (-1, 1):
            raise DomainError("leading sign must be +1 or -1")
        pts = np.asarray(self.breakpoints, dtype=float)
        if pts.size and (np.any(np.diff(pts) <= 0.0) or pts[0] <= -1.0 or pts[-1] >= 1.0):
            raise DomainError("breakpoints must be strictly increasing inside (-1, 1)")

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        k = np.searchsorted(np.asarray(self.breakpoints, dtype=float), arr, side="right")
        out = self.leading_sign * np.where(k % 2 == 0, 1.0, -1.0)
        if np.ndim(x) == 0:
            return float(out)
        return out

    @property
    def segment_edges(self) -> np.ndarray:
        return np.concatenate(([-1.0], np.asarray(self.breakpoints, dtype=float), [1.0]))

    @property
    def segment_signs(self) -> np.ndarray:
        n = len(self.breakpoints) + 1
        return self.leading_sign * np.where(np.arange(n) % 2 == 0, 1.0, -1.0)


@dataclass(frozen=True)
class CanonicalPointSet:
    """Positive half of a symmetric canonical point set; 0 is always included."""

    positive_points: tuple[float, ...]

    def __post_init__(self):
        pts = np.asarray(self.positive_points, dtype=float)
        if pts.size:
            if pts[0] <= 0.0 or pts[-1] >= 1.0 or np.any(np.diff(pts) <= 0.0):
                raise OrderingViolation(
                    "positive points must satisfy 0 < a_1 < ... < a_m < 1"
                )

    @property
    def m(self) -> int:
        return len(self.positive_points)

    @property
    def full_points(self) -> tuple[float, ...]:
        pos = tuple(float(a) for a in self.positive_points)
        return tuple(-a for a in reversed(pos)) + (0.0,) + pos

    def sign_function(self) -> SignChangeFunction:
        # leading sign -1: s is negative on the leftmost segment; the
        # opposite choice negates every moment and changes nothing else
        return SignChangeFunction(breakpoints=self.full_points, leading_sign=-1)

    @staticmethod
    def from_array(points) -> "CanonicalPointSet":
        return CanonicalPointSet(tuple(float(a) for a in np.asarray(points, dtype=float)))


def polynomial_canonical_points(n: int) -> CanonicalPointSet:
    """Closed-form canonical points for the polynomial space of dimension n.

    m = floor(n/2) and a_i = cos((m+1-i) pi / (2m+2)): the positive zeros of
    the second-kind Chebyshev polynomial of degree 2m+1 (whose sign pattern
    is orthogonal to all lower monomials).
    """
    n = int(n)
    if n < 1:
        raise DomainError("space dimension must be at least 1")
    m = n // 2
    pts = [np.cos((m + 1 - i) * np.pi / (2 * m + 2)) for i in range(1, m + 1)]
    return CanonicalPointSet(tuple(float(a) for a in pts))


def oscillating_moment(points: CanonicalPointSet, g, measure=None) -> float:
    """Integral of the alternating step function times g over [-1, 1].

    Sums signed segment integrals over the full symmetric partition; exact
    per segment whenever g carries an antiderivative and the weight is
    constant.  Vanishes automatically for even g (the step function is odd).
    """
    s = points.sign_function()
    edges = s.segment_edges
    signs = s.segment_signs
    total = 0.0
    for k in range(len(signs)):
        total += signs[k] * exact_moment(g, edges[k], edges[k + 1], measure)
    return float(total)


def _moment_vector(alpha: np.ndarray, reductions, measure) -> np.ndarray:
    pts = CanonicalPointSet.from_array(alpha)
    return np.array([oscillating_moment(pts, g, measure) for g in reductions])


def _jacobian(alpha: np.ndarray, reductions, measure) -> np.ndarray:
    # moving a_i shifts the breakpoints at +-a_i simultaneously; with sign
    # sigma_i on the segment just left of a_i this gives
    #   dF_j/da_i = 2 sigma_i g_j(a_i) (w(a_i) + w(-a_i))
    # using the oddness of the reductions g_j
    m = len(alpha)
    if measure is None:
        wsum = 2.0 * np.ones(m)
    else:
        wsum = np.asarray(measure.weight_at(alpha), dtype=float) + np.asarray(
            measure.weight_at(-alpha), dtype=float
        )
    left_sign = np.array([(-1.0) ** (m + i + 1) for i in range(1, m + 1)])
    rows = [g(alpha) for g in reductions]
    return 2.0 * np.vstack(rows) * (left_sign * wsum)[None, :]


def _project_ordered(alpha: np.ndarray) -> np.ndarray:
    """Clamp an iterate back into the ordered simplex {gap-separated in (0,1)}.

    Total: per-coordinate feasibility bounds make the forward gap cascade
    always succeed, even when a wild step piles every point onto one end.
    """
    m = len(alpha)
    a = np.sort(np.clip(np.asarray(alpha, dtype=float), _GAP, 1.0 - _GAP))
    slots = np.arange(m)
    a = np.clip(a, _GAP * (1.0 + slots), (1.0 - _GAP) - _GAP * (m - 1 - slots))
    for i in range(1, m):
        if a[i] < a[i - 1] + _GAP:
            a[i] = a[i - 1] + _GAP
    return a


@dataclass(frozen=True)
class CanonicalSolveResult:
    """Converged canonical points plus solver diagnostics."""

    points: CanonicalPointSet
    residual_inf_norm: float
    iterations: int
    converged: bool
    restarts: int

    def to_json_dict(self) -> dict:
        return {
            "points": list(self.points.full_points),
            "residual_inf_norm": self.residual_inf_norm,
            "iterations": self.iterations,
        }


def _newton(alpha0, reductions, measure, max_iterations):
    alpha = _project_ordered(np.asarray(alpha0, dtype=float))
    moments = _moment_vector(alpha, reductions, measure)
    norm = float(np.max(np.abs(moments))) if moments.size else 0.0
    m = len(alpha)
    spread = (np.arange(m) + 1.0) / (m + 1.0)
    resets = 0
    for it in range(1, max_iterations + 1):
        if not np.isfinite(norm):
            return alpha, norm, it, False
        if norm < _MOMENT_TOL:
            return alpha, norm, it - 1, True
        jac = _jacobian(alpha, reductions, measure)
        try:
            step = np.linalg.solve(jac, -moments)
        except np.linalg.LinAlgError:
            step = None
        if step is not None:
            # cap the step so far-away starts cannot fling the iterate across
            # the whole interval, then backtrack on the residual norm
            largest = float(np.max(np.abs(step)))
            if largest > 0.25:
                step *= 0.25 / largest
            t = 1.0
            while t >= 1.0 / 4096.0:
                candidate = _project_ordered(alpha + t * step)
                cand_moments = _moment_vector(candidate, reductions, measure)
                cand_norm = float(np.max(np.abs(cand_moments)))
                if np.isfinite(cand_norm) and cand_norm <= (1.0 - 1e-4 * t) * norm:
                    break
                t *= 0.5
            else:
                step = None
        stalled = step is None or (t <= 1.0 / 128.0 and cand_norm > 0.999 * norm)
        if stalled and resets < 8:
            # collapsed or boundary-pinned points degrade the Jacobian and
            # leave the line search crawling; blend toward the equispread
            # configuration and retry from a sane region
            resets += 1
            alpha = _project_ordered(0.5 * alpha + 0.5 * spread)
            moments = _moment_vector(alpha, reductions, measure)
            norm = float(np.max(np.abs(moments)))
            continue
        if step is None:
            return alpha, norm, it, False
        alpha, moments, norm = candidate, cand_moments, cand_norm
    return alpha, norm, max_iterations, norm < _MOMENT_TOL


def solve_canonical_points(
    space: BasisSpace,
    measure=None,
    initial: CanonicalPointSet | None = None,
    max_iterations: int = 80,
    fallback_restarts: int = 20,
    seed: int = 0,
) -> CanonicalSolveResult:
    """Newton solve of the oscillating-moment system for one space.

    Unknowns are the m = floor(n/2) positive points; the equations are the
    moments of the odd reductions of a parity-split complement (the even
    subspace contributes none, which requires dim Z = ceil(n/2), otherwise
    the system is not square and we refuse).  Default start: the polynomial
    closed-form points, exact for polynomials and close for splines on
    symmetric knots; then randomized ordered restarts.
    """
    n = space.dimension
    split = parity_split(space)
    m = n // 2
    if len(split.odd_reductions) != m or n - len(split.odd_reductions) != (n + 1) // 2:
        raise NonSquareSystem(
            f"even subspace has dimension {n - len(split.odd_reductions)}, "
            f"need {(n + 1) // 2} for a square {m}-point system"
        )
    if m == 0:
        return CanonicalSolveResult(
            points=CanonicalPointSet(()),
            residual_inf_norm=0.0,
            iterations=0,
            converged=True,
            restarts=0,
        )

    reductions = split.odd_reductions
    starts = []
    if initial is not None:
        starts.append(np.asarray(initial.positive_points, dtype=float))
    starts.append(np.asarray(polynomial_canonical_points(n).positive_points, dtype=float))

    rng = np.random.default_rng(seed)
    best = None
    for restart in range(len(starts) + fallback_restarts):
        if restart < len(starts):
            alpha0 = starts[restart]
        else:
            alpha0 = np.sort(rng.uniform(_GAP, 1.0 - _GAP, m))
        try:
            alpha, norm, iterations, ok = _newton(alpha0, reductions, measure, max_iterations)
        except OrderingViolation:
            continue
        if ok:
            return CanonicalSolveResult(
                points=CanonicalPointSet.from_array(alpha),
                residual_inf_norm=norm,
                iterations=iterations,
                converged=True,
                restarts=restart,
            )
        if best is None or norm < best[1]:
            best = (alpha, norm)
    raise NoConvergence(
        f"canonical point solve failed for {space.name}: best residual "
        f"{best[1]:.3e} after {len(starts) + fallback_restarts} starts"
        if best
        else f"canonical point solve failed for {space.name}"
    )


@dataclass(frozen=True)
class UniquenessReport:
    """Multistart corroboration of canonical-point uniqueness."""

    space_name: str
    trials: int
    converged: int
    failed: int
    max_deviation: float
    corroborated: bool
    statuses: tuple[str, ...]

    def to_json_dict(self) -> dict:
        return {
            "space": self.space_name,
            "trials": self.trials,
            "converged": self.converged,
            "failed": self.failed,
            "max_deviation": self.max_deviation,
            "corroborated": self.corroborated,
            "statuses": list(self.statuses),
        }


def verify_uniqueness(
    space: BasisSpace,
    points: CanonicalPointSet | None = None,
    trials: int = 50,
    measure=None,
    seed: int = 1234,
) -> UniquenessReport:
    """Re-solve from randomized ordered starts and compare against ``points``.

    Only offered for Chebyshev spaces: for weak-Chebyshev (spline) spaces
    uniqueness is an open question and we refuse rather than corroborate.
    """
    if space.kind is not SpaceKind.CHEBYSHEV:
        raise UniquenessCheckUnavailable(
            "uniqueness corroboration is restricted to Chebyshev spaces; "
            "for weak-Chebyshev spaces it is not established"
        )
    if points is None:
        points = solve_canonical_points(space, measure).points
    reference = np.asarray(points.positive_points, dtype=float)
    m = len(reference)

    split = parity_split(space)
    reductions = split.odd_reductions
    rng = np.random.default_rng(seed)
    statuses = []
    deviations = []
    converged = 0
    for _ in range(int(trials)):
        alpha0 = np.sort(rng.uniform(_GAP, 1.0 - _GAP, m)) if m else np.empty(0)
        try:
            alpha, norm, _, ok = _newton(alpha0, reductions, measure, max_iterations=80)
        except OrderingViolation:
            statuses.append("ordering-violation")
            continue
        if ok:
            converged += 1
            dev = float(np.max(np.abs(alpha - reference))) if m else 0.0
            deviations.append(dev)
            statuses.append("converged")
        else:
            statuses.append(f"no-convergence(residual={norm:.3e})")
    max_dev = float(max(deviations)) if deviations else float("nan")
    corroborated = converged == int(trials) and (not deviations or max_dev < 1e-9)
    return UniquenessReport(
        space_name=space.name,
        trials=int(trials),
        converged=converged,
        failed=int(trials) - converged,
        max_deviation=max_dev,
        corroborated=corroborated,
        statuses=tuple(statuses),
    )
