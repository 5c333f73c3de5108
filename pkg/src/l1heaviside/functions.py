"""Single-jump piecewise-smooth functions and domain normalization.

A jump function is stored as two smooth branches around an interior jump
location.  Every solver in this package works on the canonical configuration
(domain [-1, 1], jump at 0); ``normalize`` moves an arbitrary problem there
with a strictly increasing change of variables and pulls the integration
measure back through it, so L1 distances are preserved exactly.

Value at the jump point itself: ``eval`` returns the right-hand branch.  The
point has measure zero and never affects an integral, but plotting and sign
bookkeeping need a fixed convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from .errors import DomainError

_POSITIVITY_SAMPLES = 1009  # odd so x = 0 is probed


@dataclass(frozen=True)
class Branch:
    """One smooth piece of a jump function: an evaluator plus an optional
    exact antiderivative used for closed-form integrals."""

    fn: Callable
    antiderivative: Callable | None = None

    def __call__(self, x):
        return np.asarray(self.fn(np.asarray(x, dtype=float)), dtype=float)

    @staticmethod
    def constant(value: float) -> "Branch":
        v = float(value)
        return Branch(
            fn=lambda x: np.full_like(np.asarray(x, dtype=float), v),
            antiderivative=lambda x: v * np.asarray(x, dtype=float),
        )

    @staticmethod
    def from_callable(fn: Callable, antiderivative: Callable | None = None) -> "Branch":
        return Branch(fn=fn, antiderivative=antiderivative)


@dataclass(frozen=True)
class HeavisideTypeFunction:
    """A function smooth on its domain except for one interior jump.

    Both one-sided limits at the jump must be finite; a zero jump magnitude is
    allowed (the function is then continuous) and flagged via ``is_degenerate``.
    """

    left_branch: Branch
    right_branch: Branch
    jump_location: float
    domain: tuple[float, float]

    def __post_init__(self):
        a, b = self.domain
        if not (np.isfinite(a) and np.isfinite(b) and a < b):
            raise DomainError(f"invalid domain [{a}, {b}]")
        if not (a < self.jump_location < b):
            raise DomainError(
                f"jump location {self.jump_location} must lie strictly inside ({a}, {b})"
            )
        for limit in (self.left_limit, self.right_limit):
            if not np.isfinite(limit):
                raise DomainError("one-sided limits at the jump must be finite")

    @property
    def left_limit(self) -> float:
        return float(self.left_branch(self.jump_location))

    @property
    def right_limit(self) -> float:
        return float(self.right_branch(self.jump_location))

    @property
    def jump_magnitude(self) -> float:
        return abs(self.right_limit - self.left_limit)

    @property
    def is_degenerate(self) -> bool:
        """True when the jump magnitude is zero (continuous function)."""
        return self.jump_magnitude == 0.0

    def __call__(self, x):
        """Evaluate at scalar or array x; the jump point takes the right limit."""
        arr = np.asarray(x, dtype=float)
        a, b = self.domain
        if np.any(arr < a) or np.any(arr > b):
            raise DomainError(f"evaluation point outside domain [{a}, {b}]")
        out = np.where(arr < self.jump_location, self.left_branch(arr), self.right_branch(arr))
        if np.ndim(x) == 0:
            return float(out)
        return out


def heaviside(jump_low: float, jump_high: float) -> HeavisideTypeFunction:
    """Step function on [-1, 1]: ``jump_low`` left of 0, ``jump_high`` right of it."""
    return HeavisideTypeFunction(
        left_branch=Branch.constant(jump_low),
        right_branch=Branch.constant(jump_high),
        jump_location=0.0,
        domain=(-1.0, 1.0),
    )


class MeasureKind(Enum):
    LEBESGUE = "lebesgue"
    WEIGHTED_LEBESGUE = "weighted_lebesgue"


@dataclass(frozen=True)
class Measure:
    """Lebesgue measure on [-1, 1], optionally with a smooth positive weight.

    ``constant`` caches the weight value when it is constant; exact
    antiderivative integration is only valid in that case."""

    kind: MeasureKind
    weight: Callable | None = None
    constant: float | None = 1.0

    def __post_init__(self):
        if self.kind is MeasureKind.WEIGHTED_LEBESGUE:
            if self.weight is None:
                raise ValueError("weighted measure needs a weight function")
            probes = np.linspace(-1.0, 1.0, _POSITIVITY_SAMPLES)
            values = np.asarray(self.weight(probes), dtype=float)
            if not np.all(np.isfinite(values)) or np.any(values <= 0.0):
                raise ValueError("weight must be finite and strictly positive on [-1, 1]")

    @staticmethod
    def lebesgue() -> "Measure":
        return Measure(kind=MeasureKind.LEBESGUE, weight=None, constant=1.0)

    @staticmethod
    def weighted(weight: Callable, constant: float | None = None) -> "Measure":
        return Measure(kind=MeasureKind.WEIGHTED_LEBESGUE, weight=weight, constant=constant)

    def weight_at(self, x):
        if self.kind is MeasureKind.LEBESGUE:
            return np.ones_like(np.asarray(x, dtype=float))
        if self.constant is not None:
            return np.full_like(np.asarray(x, dtype=float), self.constant)
        return np.asarray(self.weight(np.asarray(x, dtype=float)), dtype=float)

    @property
    def is_constant(self) -> bool:
        return self.constant is not None

    @property
    def is_symmetric(self) -> bool:
        """True when the weight is even about 0 (sampled check for the
        non-constant case); the symmetric canonical point construction is
        exact only then."""
        if self.constant is not None:
            return True
        xs = np.linspace(1e-3, 1.0, 257)
        return bool(np.max(np.abs(self.weight_at(xs) - self.weight_at(-xs))) < 1e-12)


class TransformKind(Enum):
    IDENTITY = "identity"
    AFFINE = "affine"
    MOEBIUS = "moebius"


@dataclass(frozen=True)
class Transform:
    """Strictly increasing change of variables from [a, b] onto [-1, 1]."""

    kind: TransformKind
    forward: Callable = field(repr=False)
    inverse: Callable = field(repr=False)
    inverse_derivative: Callable = field(repr=False)

    def __call__(self, x):
        return self.forward(np.asarray(x, dtype=float))


def _identity_transform() -> Transform:
    return Transform(
        kind=TransformKind.IDENTITY,
        forward=lambda x: x,
        inverse=lambda u: u,
        inverse_derivative=lambda u: np.ones_like(np.asarray(u, dtype=float)),
    )


def _affine_transform(a: float, b: float, delta: float) -> Transform:
    slope = 2.0 / (b - a)
    return Transform(
        kind=TransformKind.AFFINE,
        forward=lambda x: slope * (np.asarray(x, dtype=float) - delta),
        inverse=lambda u: delta + np.asarray(u, dtype=float) / slope,
        inverse_derivative=lambda u: np.full_like(np.asarray(u, dtype=float), 1.0 / slope),
    )


def _moebius_transform(a: float, b: float, delta: float) -> Transform:
    # Increasing fractional-linear map with (a, delta, b) -> (-1, 0, 1):
    # h(x) = (x - delta) / (B x + C).  Solving h(a) = -1, h(b) = 1 gives
    # B = (a + b - 2 delta) / (b - a) and C = (b - delta) - B b; the pole
    # -C/B then lies outside [a, b], so h is smooth and increasing there.
    B = (a + b - 2.0 * delta) / (b - a)
    C = (b - delta) - B * b
    scale = C + B * delta  # numerator of h'; positive for increasing maps

    def forward(x):
        x = np.asarray(x, dtype=float)
        return (x - delta) / (B * x + C)

    def inverse(u):
        u = np.asarray(u, dtype=float)
        return (delta + u * C) / (1.0 - u * B)

    def inverse_derivative(u):
        u = np.asarray(u, dtype=float)
        return scale / (1.0 - u * B) ** 2

    return Transform(
        kind=TransformKind.MOEBIUS,
        forward=forward,
        inverse=inverse,
        inverse_derivative=inverse_derivative,
    )


@dataclass(frozen=True)
class NormalizedProblem:
    """A jump function moved to [-1, 1] with the jump at 0, together with the
    pulled-back measure and the transform used (for mapping results back)."""

    function: HeavisideTypeFunction
    measure: Measure
    transform: Transform

    def __call__(self, x):
        return self.function(x)


def _compose_branch(branch: Branch, transform: Transform) -> Branch:
    if transform.kind is TransformKind.IDENTITY:
        return branch
    fn = branch.fn
    inverse = transform.inverse
    return Branch(fn=lambda u: fn(inverse(u)), antiderivative=None)


def normalize(f: HeavisideTypeFunction) -> NormalizedProblem:
    """Move ``f`` to the canonical configuration ([-1, 1], jump at 0).

    A centered jump only needs an affine map and the measure keeps a constant
    weight ((b - a)/2; plain Lebesgue when the domain already has length 2).
    Otherwise the unique increasing fractional-linear map through the three
    points (a, jump, b) -> (-1, 0, 1) is used and the measure becomes a
    weighted one, the weight being the derivative of the inverse map.  Either
    way ``int |f - g|`` over [a, b] equals the weighted integral of the
    transported difference over [-1, 1].
    """
    a, b = f.domain
    delta = f.jump_location
    if (a, b) == (-1.0, 1.0) and delta == 0.0:
        return NormalizedProblem(function=f, measure=Measure.lebesgue(), transform=_identity_transform())

    if delta == (a + b) / 2.0:
        transform = _affine_transform(a, b, delta)
        width = (b - a) / 2.0
        if width == 1.0:
            measure = Measure.lebesgue()
        else:
            measure = Measure.weighted(lambda u, w=width: np.full_like(np.asarray(u, dtype=float), w), constant=width)
    else:
        transform = _moebius_transform(a, b, delta)
        measure = Measure.weighted(transform.inverse_derivative, constant=None)

    moved = HeavisideTypeFunction(
        left_branch=_preserve_constant(_compose_branch(f.left_branch, transform), f.left_branch),
        right_branch=_preserve_constant(_compose_branch(f.right_branch, transform), f.right_branch),
        jump_location=0.0,
        domain=(-1.0, 1.0),
    )
    return NormalizedProblem(function=moved, measure=measure, transform=transform)


def _preserve_constant(composed: Branch, original: Branch) -> Branch:
    # Composition with the change of variables leaves constants constant, so
    # their exact antiderivative hook survives.
    if original.antiderivative is None:
        return composed
    probe = original(np.array([-0.25, 0.125, 0.5]))
    if float(np.ptp(probe)) == 0.0:
        return Branch.constant(float(probe[0]))
    return composed


def normalized(f: HeavisideTypeFunction) -> NormalizedProblem:
    """Alias kept close to ``normalize`` for readability at call sites."""
    return normalize(f)
