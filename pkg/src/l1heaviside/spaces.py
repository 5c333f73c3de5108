"""Approximation spaces: polynomials and Hermite splines with fixed knots.

Every basis function carries an optional exact antiderivative so segment
integrals against constant-weight measures can be computed in closed form,
plus the list of points where it is only piecewise-smooth (quadrature is
subdivided there).  The symmetric constructions (even sub-basis, parity
split) are what the canonical point solver consumes: with a symmetric
measure only the odd reductions of a complement subspace produce nontrivial
moment conditions.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad

from .errors import DomainError

EVEN = 1
ODD = -1


class SpaceKind(Enum):
    CHEBYSHEV = "chebyshev"
    WEAK_CHEBYSHEV = "weak-chebyshev"


@dataclass(frozen=True)
class BasisFunction:
    """A labelled scalar function with an optional exact antiderivative.

    ``parity`` is +1 (even), -1 (odd) or None; ``breakpoints`` lists the
    abscissae where smoothness is limited (truncated-power knots).
    """

    label: str
    fn: Callable
    antiderivative: Callable | None = None
    parity: int | None = None
    breakpoints: tuple[float, ...] = ()

    def __call__(self, x):
        return np.asarray(self.fn(np.asarray(x, dtype=float)), dtype=float)


def monomial(power: int, center: float = 0.0) -> BasisFunction:
    j = int(power)
    c = float(center)
    if c == 0.0:
        label = "1" if j == 0 else ("x" if j == 1 else f"x^{j}")
        parity = EVEN if j % 2 == 0 else ODD
    else:
        base = f"(x{-c:+g})"
        label = base if j == 1 else f"{base}^{j}"
        parity = None
    return BasisFunction(
        label=label,
        fn=lambda x: (x - c) ** j,
        antiderivative=lambda x: (x - c) ** (j + 1) / (j + 1),
        parity=parity,
    )


def truncated_power(knot: float, power: int) -> BasisFunction:
    """(x - t)_+^q, the one-sided power anchored at an interior knot."""
    t = float(knot)
    q = int(power)
    if q < 1:
        raise ValueError("truncated power needs q >= 1 to stay continuous")

    def fn(x):
        d = x - t
        return np.where(d > 0.0, d, 0.0) ** q

    def anti(x):
        d = x - t
        return np.where(d > 0.0, d, 0.0) ** (q + 1) / (q + 1)

    return BasisFunction(
        label=f"(x{-t:+g})_+^{q}", fn=fn, antiderivative=anti, parity=None, breakpoints=(t,)
    )


def reflected_truncated_power(knot: float, power: int) -> BasisFunction:
    """(|x| - t)_+^q for t > 0: even, supported outside (-t, t)."""
    t = float(knot)
    q = int(power)
    if t <= 0.0:
        raise ValueError("reflected truncated power needs a positive knot")

    def fn(x):
        d = np.abs(x) - t
        return np.where(d > 0.0, d, 0.0) ** q

    def anti(x):
        # odd antiderivative: (x-t)_+^{q+1}/(q+1) - (-x-t)_+^{q+1}/(q+1)
        up = np.where(x - t > 0.0, x - t, 0.0) ** (q + 1)
        dn = np.where(-x - t > 0.0, -x - t, 0.0) ** (q + 1)
        return (up - dn) / (q + 1)

    return BasisFunction(
        label=f"(|x|{-t:+g})_+^{q}",
        fn=fn,
        antiderivative=anti,
        parity=EVEN,
        breakpoints=(-t, t),
    )


def abs_power(power: int) -> BasisFunction:
    """|x|^q; even for every q, with a break of smoothness at 0 when q is odd."""
    q = int(power)
    return BasisFunction(
        label=f"|x|^{q}",
        fn=lambda x: np.abs(x) ** q,
        antiderivative=lambda x: np.sign(x) * np.abs(x) ** (q + 1) / (q + 1),
        parity=EVEN,
        breakpoints=(0.0,),
    )


@dataclass(frozen=True)
class KnotVector:
    """Strictly increasing knot sequence inside [-1, 1]."""

    points: tuple[float, ...]

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.size < 2:
            raise DomainError("need at least two knots")
        if pts[0] < -1.0 or pts[-1] > 1.0:
            raise DomainError("knots must lie inside [-1, 1]")
        if np.any(np.diff(pts) <= 0.0):
            raise DomainError("knots must be strictly increasing")

    def __len__(self):
        return len(self.points)

    @property
    def interior(self) -> tuple[float, ...]:
        return self.points[1:-1]

    @property
    def is_symmetric(self) -> bool:
        pts = np.asarray(self.points, dtype=float)
        return bool(np.max(np.abs(pts + pts[::-1])) < 1e-14)

    @staticmethod
    def uniform(count: int) -> "KnotVector":
        if count < 2:
            raise DomainError("need at least two knots")
        return KnotVector(tuple(np.linspace(-1.0, 1.0, count)))

    @staticmethod
    def symmetric(positive_interior: Sequence[float], include_zero: bool = True) -> "KnotVector":
        pos = tuple(sorted(float(t) for t in positive_interior))
        if any(not 0.0 < t < 1.0 for t in pos):
            raise DomainError("positive interior knots must lie in (0, 1)")
        mid = (0.0,) if include_zero else ()
        return KnotVector((-1.0,) + tuple(-t for t in reversed(pos)) + mid + pos + (1.0,))


class BasisSpace:
    """A finite-dimensional function space given by an explicit ordered basis."""

    def __init__(self, name: str, functions: Sequence[BasisFunction], kind: SpaceKind = SpaceKind.CHEBYSHEV):
        self.name = name
        self.functions = tuple(functions)
        self.kind = kind
        self._even_dimension = None

    @property
    def dimension(self) -> int:
        return len(self.functions)

    @property
    def even_dimension(self) -> int:
        """Dimension of the even-symmetric subspace."""
        if self._even_dimension is None:
            self._even_dimension = len(parity_split(self).even)
        return self._even_dimension

    @property
    def breakpoints(self) -> tuple[float, ...]:
        pts = sorted({b for phi in self.functions for b in phi.breakpoints})
        return tuple(pts)

    def evaluate_matrix(self, x) -> np.ndarray:
        """Collocation matrix A[i, j] = phi_j(x_i)."""
        pts = np.atleast_1d(np.asarray(x, dtype=float))
        return np.column_stack([phi(pts) for phi in self.functions])

    def element(self, coefficients) -> "LinearCombination":
        return LinearCombination(self, np.asarray(coefficients, dtype=float))

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r}, dim={self.dimension})"


class HermiteSplineSpace(BasisSpace):
    """Piecewise polynomials of degree 2k+1 with smoothness C^k at the knots.

    The basis is the 2k+2 shifted monomials anchored at the first knot plus
    the truncated powers (x - x_j)_+^q, q = k+1 .. 2k+1, one block per
    interior knot; with N knots the dimension is N (k + 1).  With interior
    knots present every nonzero element still has at most dim-1 strong sign
    changes, but may vanish on whole subintervals (weak-Chebyshev).
    """

    def __init__(self, knots: KnotVector, smoothness: int):
        k = int(smoothness)
        if k < 0:
            raise DomainError("smoothness order must be nonnegative")
        functions = [monomial(j, center=knots.points[0]) for j in range(2 * k + 2)]
        for t in knots.interior:
            functions.extend(truncated_power(t, q) for q in range(k + 1, 2 * k + 2))
        super().__init__(
            f"hermite_spline(k={k}, N={len(knots)})", functions, kind=SpaceKind.WEAK_CHEBYSHEV
        )
        self.knots = knots
        self.smoothness = k
        self.degree = 2 * k + 1


class LinearCombination:
    """sum_j c_j phi_j over a basis, with the inherited antiderivative when
    every basis function has one."""

    def __init__(self, space: BasisSpace, coefficients: np.ndarray):
        if len(coefficients) != space.dimension:
            raise ValueError("coefficient length must match the space dimension")
        self.space = space
        self.coefficients = np.asarray(coefficients, dtype=float)

    def __call__(self, x):
        pts = np.asarray(x, dtype=float)
        out = self.space.evaluate_matrix(pts) @ self.coefficients
        if np.ndim(x) == 0:
            return float(out[0])
        return out

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return self.space.breakpoints

    @property
    def antiderivative(self) -> Callable | None:
        hooks = [phi.antiderivative for phi in self.space.functions]
        if any(h is None for h in hooks):
            return None
        coeffs = self.coefficients

        def anti(x):
            pts = np.atleast_1d(np.asarray(x, dtype=float))
            mat = np.column_stack([np.asarray(h(pts), dtype=float) for h in hooks])
            out = mat @ coeffs
            return out if np.ndim(x) else float(out[0])

        return anti


def polynomial_space(degree: int) -> BasisSpace:
    """Polynomials of degree <= d in the monomial basis (a Chebyshev system)."""
    d = int(degree)
    if d < 0:
        raise DomainError("degree must be nonnegative")
    space = BasisSpace(
        f"polynomials(degree<={d})", [monomial(j) for j in range(d + 1)], kind=SpaceKind.CHEBYSHEV
    )
    space._even_dimension = (d + 1 + 1) // 2
    return space


def hermite_spline_space(knots: KnotVector, smoothness: int) -> HermiteSplineSpace:
    return HermiteSplineSpace(knots, smoothness)


def space_from_description(desc: dict) -> BasisSpace:
    """Build a space from its JSON-style description.

    Accepted forms: {"type": "polynomial", "degree": d} and
    {"type": "hermite_spline", "knots": [...], "k": k}.
    """
    if not isinstance(desc, dict) or "type" not in desc:
        raise DomainError("space description must be a mapping with a 'type' field")
    kind = desc["type"]
    if kind == "polynomial":
        if "degree" not in desc:
            raise DomainError("polynomial space description needs 'degree'")
        return polynomial_space(int(desc["degree"]))
    if kind == "hermite_spline":
        if "knots" not in desc or "k" not in desc:
            raise DomainError("hermite_spline space description needs 'knots' and 'k'")
        knots = KnotVector(tuple(float(t) for t in desc["knots"]))
        return hermite_spline_space(knots, int(desc["k"]))
    raise DomainError(f"unknown space type {kind!r}")


def symmetric_even_basis(space: BasisSpace) -> tuple[BasisFunction, ...]:
    """Explicit basis of the even-symmetric subspace.

    For polynomials these are the even monomials.  For a Hermite spline space
    with a symmetric knot sequence: even monomials up to x^{2k}, reflected
    truncated powers for each positive interior knot, and |x|^q for the odd
    exponents q in {k+1, .., 2k+1} when 0 is itself a knot (odd q makes
    |x|^q break at 0 yet stay C^{q-1}, so it lies in the space; even q would
    duplicate a monomial).  The count always comes out to ceil(dim / 2).
    """
    if isinstance(space, HermiteSplineSpace):
        if not space.knots.is_symmetric:
            raise DomainError("even sub-basis needs a symmetric knot sequence")
        k = space.smoothness
        out = [monomial(2 * j) for j in range(k + 1)]
        for t in space.knots.interior:
            if t > 0.0:
                out.extend(reflected_truncated_power(t, q) for q in range(k + 1, 2 * k + 2))
        if any(t == 0.0 for t in space.knots.interior):
            out.extend(abs_power(q) for q in range(k + 1, 2 * k + 2) if q % 2 == 1)
        expected = (space.dimension + 1) // 2
        if len(out) != expected:
            raise AssertionError(f"even basis count {len(out)} != {expected}")
        return tuple(out)
    out = [phi for phi in space.functions if phi.parity == EVEN]
    if not out:
        raise DomainError("space has no even-symmetric part in its basis")
    return tuple(out)


@dataclass(frozen=True)
class ParitySplit:
    """Decomposition Y = Z + W with Z the even-symmetric elements.

    ``odd_reductions[j]`` is w_j(x) - w_j(-x) for the j-th complement basis
    element; these span the odd parts reachable from Y and are exactly the
    functions whose oscillating moments the canonical point solver must kill.
    """

    even: tuple[LinearCombination, ...]
    complement: tuple[LinearCombination, ...]
    odd_reductions: tuple[BasisFunction, ...]


def _odd_reduction(element, label: str) -> BasisFunction:
    anti = element.antiderivative

    def fn(x):
        x = np.asarray(x, dtype=float)
        return element(x) - element(-x)

    hook = None
    if anti is not None:
        def hook(x, _a=anti):
            x = np.asarray(x, dtype=float)
            return _a(x) + _a(-x)

    breaks = sorted({b for t in element.breakpoints for b in (t, -t)})
    return BasisFunction(
        label=label, fn=fn, antiderivative=hook, parity=ODD, breakpoints=tuple(breaks)
    )


def parity_split(space: BasisSpace, grid: int = 0) -> ParitySplit:
    """Split a space into even elements and a complement via the odd-part map.

    When every basis function carries a parity tag (monomial bases) the split
    is read off directly.  Otherwise the map g -> g(x) - g(-x) is sampled on
    a grid in (0, 1]; the null space of the (column-equilibrated) sample
    matrix gives the even elements, the row space a complement.  Even basis
    functions produce exactly zero columns in floating point, so the
    numerical split is clean.
    """
    dim = space.dimension

    if all(phi.parity in (EVEN, ODD) for phi in space.functions):
        eye = np.eye(dim)
        even = [space.element(eye[j]) for j, phi in enumerate(space.functions) if phi.parity == EVEN]
        comp = [space.element(eye[j]) for j, phi in enumerate(space.functions) if phi.parity == ODD]
        reductions = tuple(
            _odd_reduction(w, label=f"2*{space.functions[int(np.argmax(w.coefficients))].label}")
            for w in comp
        )
        return ParitySplit(even=tuple(even), complement=tuple(comp), odd_reductions=reductions)

    if grid <= 0:
        grid = max(8 * dim + 13, 64)
    xs = np.linspace(1.0 / grid, 1.0, grid)
    odd_part = space.evaluate_matrix(xs) - space.evaluate_matrix(-xs)

    scale = np.max(np.abs(odd_part), axis=0)
    scale[scale == 0.0] = 1.0
    _, sigma, vt = np.linalg.svd(odd_part / scale, full_matrices=True)
    tol = max(odd_part.shape) * np.finfo(float).eps * (sigma[0] if sigma.size else 0.0)
    rank = int(np.sum(sigma > tol))

    def de_equilibrate(rows: np.ndarray) -> list[LinearCombination]:
        out = []
        for v in rows:
            c = v / scale
            c = c / np.max(np.abs(c))
            out.append(space.element(c))
        return out

    even = de_equilibrate(vt[rank:])
    complement = de_equilibrate(vt[:rank])
    reductions = tuple(
        _odd_reduction(w, label=f"oddpart[{j}]") for j, w in enumerate(complement)
    )
    return ParitySplit(even=tuple(even), complement=tuple(complement), odd_reductions=reductions)


def exact_moment(g, lo: float, hi: float, measure=None) -> float:
    """Integral of ``g`` over [lo, hi] against the measure (default Lebesgue).

    Uses the closed-form antiderivative when the function carries one and the
    weight is constant; otherwise adaptive quadrature with subdivision forced
    at 0 and at the function's own breakpoints, since integrands are only
    piecewise-smooth.
    """
    lo = float(lo)
    hi = float(hi)
    if hi < lo:
        raise DomainError(f"reversed integration bounds [{lo}, {hi}]")
    if hi == lo:
        return 0.0

    constant_weight = 1.0 if measure is None else (measure.constant if measure.is_constant else None)
    anti = getattr(g, "antiderivative", None)
    if anti is not None and constant_weight is not None:
        return float(constant_weight) * (float(np.asarray(anti(hi))) - float(np.asarray(anti(lo))))

    if measure is None:
        weight = lambda x: 1.0
    else:
        weight = lambda x: float(np.asarray(measure.weight_at(x)))
    cuts = sorted({b for b in getattr(g, "breakpoints", ()) if lo < b < hi} | ({0.0} if lo < 0.0 < hi else set()))
    edges = [lo] + cuts + [hi]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        value, _ = quad(
            lambda x: float(np.asarray(g(x))) * weight(x),
            a,
            b,
            epsabs=1e-13,
            epsrel=1e-12,
            limit=200,
        )
        total += value
    return float(total)
