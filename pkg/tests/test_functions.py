"""Jump functions, measures, and domain normalization."""

import numpy as np
import pytest

from l1heaviside import (
    Branch,
    DomainError,
    HeavisideTypeFunction,
    Measure,
    heaviside,
    normalize,
)


def make_step(lo, hi, domain=(-1.0, 1.0), jump=0.0):
    return HeavisideTypeFunction(
        left_branch=Branch.constant(lo),
        right_branch=Branch.constant(hi),
        jump_location=jump,
        domain=tuple(domain),
    )


def test_heaviside_limits_and_jump(step):
    assert step.left_limit == 0.0
    assert step.right_limit == 1.0
    assert step.jump_magnitude == 1.0
    assert not step.is_degenerate


def test_value_at_jump_uses_right_branch(step):
    assert step(0.0) == 1.0
    assert step(-1e-12) == 0.0


def test_vectorized_call(step):
    x = np.array([-0.5, 0.0, 0.5])
    np.testing.assert_array_equal(step(x), [0.0, 1.0, 1.0])


def test_call_outside_domain_raises(step):
    with pytest.raises(DomainError):
        step(1.5)


def test_jump_on_boundary_rejected():
    with pytest.raises(DomainError):
        make_step(0.0, 1.0, jump=1.0)


def test_degenerate_jump_detected():
    f = heaviside(0.5, 0.5)
    assert f.is_degenerate
    assert f.jump_magnitude == 0.0


def test_infinite_limit_rejected():
    bad = Branch(lambda x: np.full_like(np.asarray(x, dtype=float), np.inf))
    with pytest.raises(DomainError):
        HeavisideTypeFunction(
            left_branch=bad,
            right_branch=Branch.constant(1.0),
            jump_location=0.0,
            domain=(-1.0, 1.0),
        )


def test_measure_requires_positive_weight():
    with pytest.raises(ValueError):
        Measure.weighted(lambda x: np.asarray(x, dtype=float))  # vanishes at 0


def test_measure_symmetry_probe():
    assert Measure.lebesgue().is_symmetric
    assert Measure.weighted(lambda x: 1.0 + np.asarray(x) ** 2).is_symmetric
    assert not Measure.weighted(lambda x: np.exp(np.asarray(x))).is_symmetric


# --- normalization -------------------------------------------------------


def test_identity_normalization(step):
    prob = normalize(step)
    assert prob.transform.kind.name == "IDENTITY"
    assert prob.function is step
    assert prob.measure.is_constant


def test_centered_jump_uses_affine_map():
    f = make_step(0.0, 1.0, domain=(1.0, 5.0), jump=3.0)
    prob = normalize(f)
    t = prob.transform
    assert t.kind.name == "AFFINE"
    assert t.forward(3.0) == pytest.approx(0.0, abs=1e-15)
    assert t.forward(5.0) == pytest.approx(1.0, abs=1e-15)
    # constant weight carries half the interval length
    assert prob.measure.is_constant
    assert prob.measure.weight_at(0.3) == pytest.approx(2.0, rel=1e-15)


def test_offcenter_jump_uses_moebius_map():
    f = make_step(0.0, 1.0, jump=1.0 / 3.0)
    prob = normalize(f)
    assert prob.transform.kind.name == "MOEBIUS"
    h = prob.transform.forward
    assert h(1.0 / 3.0) == pytest.approx(0.0, abs=1e-15)
    assert h(-1.0) == pytest.approx(-1.0, abs=1e-14)
    assert h(1.0) == pytest.approx(1.0, abs=1e-14)


def test_moebius_mass_equals_interval_length():
    f = make_step(0.0, 1.0, jump=1.0 / 3.0)
    prob = normalize(f)
    u = np.linspace(-1.0, 1.0, 200001)
    mass = np.trapezoid(prob.measure.weight_at(u), u)
    assert mass == pytest.approx(2.0, abs=1e-8)


def test_transform_is_increasing():
    rng = np.random.default_rng(7)
    for _ in range(25):
        a = rng.uniform(-3.0, 0.0)
        b = a + rng.uniform(0.5, 4.0)
        d = rng.uniform(a + 0.05 * (b - a), b - 0.05 * (b - a))
        t = normalize(make_step(0.0, 1.0, domain=(a, b), jump=d)).transform
        u = np.linspace(a, b, 1000)
        v = t.forward(u)
        assert np.all(np.diff(v) > 0)
        assert v[0] == pytest.approx(-1.0, abs=1e-12)
        assert v[-1] == pytest.approx(1.0, abs=1e-12)
        assert t.forward(d) == pytest.approx(0.0, abs=1e-12)


def test_transform_roundtrip():
    t = normalize(make_step(0.0, 1.0, domain=(-2.0, 1.0), jump=0.25)).transform
    x = np.linspace(-2.0, 1.0, 501)
    np.testing.assert_allclose(t.inverse(t.forward(x)), x, atol=1e-12)


def test_normalization_preserves_l1_distance():
    # the weighted integral of a transported difference matches the direct
    # integral over the original domain
    rng = np.random.default_rng(11)
    for _ in range(10):
        a = rng.uniform(-3.0, -0.5)
        b = rng.uniform(0.5, 3.0)
        d = rng.uniform(a + 0.1, b - 0.1)
        c0, c1, c2 = rng.uniform(-1.0, 1.0, 3)
        prob = normalize(make_step(0.0, 1.0, domain=(a, b), jump=d))

        def dist(x):
            return np.abs(c0 + c1 * x + c2 * x * x)

        x = np.linspace(a, b, 40001)
        direct = np.trapezoid(dist(x), x)
        u = np.linspace(-1.0, 1.0, 40001)
        pulled = dist(prob.transform.inverse(u)) * prob.measure.weight_at(u)
        assert np.trapezoid(pulled, u) == pytest.approx(direct, rel=1e-6, abs=1e-10)


def test_normalize_idempotent(step):
    prob = normalize(step)
    again = normalize(prob.function)
    assert again.transform.kind.name == "IDENTITY"


def test_normalized_problem_callable():
    f = make_step(-1.0, 2.0, domain=(0.0, 4.0), jump=2.0)
    prob = normalize(f)
    assert prob(0.5) == pytest.approx(f(prob.transform.inverse(0.5)))
    assert prob(-0.5) == pytest.approx(-1.0)
    assert prob(0.0) == pytest.approx(2.0)


def test_constant_branches_keep_exact_antiderivative():
    f = make_step(0.25, -1.5, domain=(0.0, 5.0), jump=2.0)
    prob = normalize(f)
    anti = prob.function.left_branch.antiderivative
    assert anti is not None
    assert anti(1.0) - anti(0.0) == pytest.approx(0.25)
