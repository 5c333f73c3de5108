import pytest

from l1heaviside import KnotVector, heaviside, hermite_spline_space, polynomial_space


@pytest.fixture
def step():
    """Unit jump at the origin on [-1, 1]."""
    return heaviside(0.0, 1.0)


@pytest.fixture
def cubic_space():
    return polynomial_space(3)


@pytest.fixture
def spline_space():
    # 5 uniform knots, C^1, local degree 3, dimension 10
    return hermite_spline_space(KnotVector.uniform(5), 1)
