import math

import numpy as np
import pytest

from numerics.grid import (
    Field,
    GridSpec,
    antiderivative,
    check_decay,
    derivative,
    embedding_constant,
    integral,
    l2_norm,
    linf_norm,
    sobolev_norm,
    trapezoidal_mean,
)
from utils.errors import DecayViolation, MeanZeroViolation


def test_grid_nodes():
    grid = GridSpec(20.0, 512)
    assert grid.dx * grid.points == 40.0
    assert grid.nodes[0] == -20.0
    assert grid.nodes[-1] == pytest.approx(20.0 - grid.dx)
    assert grid.nodes[256] == 0.0


@pytest.mark.parametrize("points", [8, 100, 513])
def test_grid_rejects_bad_sizes(points):
    with pytest.raises(ValueError):
        GridSpec(20.0, points)


def test_field_is_read_only(grid):
    f = grid.sample(np.sin)
    with pytest.raises(ValueError):
        f.values[0] = 1.0
    with pytest.raises(ValueError):
        Field(grid, np.full(grid.points, np.nan))


def test_field_arithmetic(grid):
    a = grid.sample(np.sin)
    b = grid.sample(np.cos)
    np.testing.assert_array_equal((a + b).values, np.sin(grid.nodes) + np.cos(grid.nodes))
    np.testing.assert_array_equal((a - b).values, np.sin(grid.nodes) - np.cos(grid.nodes))
    np.testing.assert_array_equal((2.0 * a).values, (a * 2.0).values)
    assert (a - a).grid is grid
    with pytest.raises(TypeError):
        -a


def test_derivative_exact_cases(grid):
    assert linf_norm(derivative(grid.sample(lambda x: 3.0 + 0 * x))) == 0.0
    slope = derivative(grid.sample(lambda x: x)).values
    np.testing.assert_allclose(slope, 1.0, rtol=1e-12)


def test_derivative_accuracy(coarse_grid):
    L = coarse_grid.half_length
    f = coarse_grid.sample(lambda x: np.sin(np.pi * x / L))
    exact = (np.pi / L) * np.cos(np.pi * coarse_grid.nodes / L)
    assert np.max(np.abs(derivative(f).values - exact)[1:-1]) <= 1e-3


def test_antiderivative_recovers_gaussian(grid):
    dx = grid.dx
    omega = grid.sample(lambda x: -2 * x * np.exp(-x ** 2))
    eta = antiderivative(omega)
    assert eta.values[0] == 0.0
    bound = 1.2 * dx ** 2 / 12 * 2.0
    assert np.max(np.abs(eta.values - np.exp(-grid.nodes ** 2))) <= bound


def test_antiderivative_odd_field(grid):
    f = grid.sample(lambda x: x * np.exp(-x ** 2))
    bound = 1.2 * grid.dx ** 2 / 12 * 1.0
    assert np.max(np.abs(antiderivative(f).values + 0.5 * np.exp(-grid.nodes ** 2))) <= bound


def test_antiderivative_requires_zero_mean(gaussian):
    with pytest.raises(MeanZeroViolation):
        antiderivative(gaussian)
    assert antiderivative(gaussian.grid.zeros()).values.sum() == 0.0


def test_derivative_of_antiderivative(grid):
    f = grid.sample(lambda x: np.sin(2 * x) * np.exp(-x ** 2 / 4))
    back = derivative(antiderivative(f))
    assert np.max(np.abs(back.values - f.values)[1:-1]) <= 5 * grid.dx ** 2


def test_integral_and_mean(grid, gaussian):
    assert integral(gaussian) == pytest.approx(math.sqrt(math.pi), abs=1e-10)
    assert abs(integral(grid.sample(lambda x: x * np.exp(-x ** 2)))) <= 1e-12
    assert trapezoidal_mean(gaussian) == pytest.approx(math.sqrt(math.pi) / grid.span, rel=1e-12)
    assert abs(integral(derivative(gaussian))) <= 1e-8


def test_linf_norm(grid, coarse_grid, gaussian):
    assert linf_norm(gaussian) == 1.0
    L = coarse_grid.half_length
    assert linf_norm(coarse_grid.sample(lambda x: np.sin(np.pi * x / L))) == pytest.approx(1.0, abs=1e-4)


def test_sobolev_norm_zero_order_is_l2(gaussian):
    assert sobolev_norm(gaussian, 0.0) == pytest.approx(l2_norm(gaussian), rel=1e-10)


def test_sobolev_norm_single_mode(grid):
    L = grid.half_length
    f = grid.sample(lambda x: np.sin(np.pi * x / L))
    expected = math.sqrt(2 * L) * math.sqrt((1 + (math.pi / L) ** 2) / 2)
    assert sobolev_norm(f, 1.0) == pytest.approx(expected, rel=1e-12)
    assert expected == pytest.approx(4.5270, abs=1e-4)


def test_sobolev_norm_monotone_and_triangle(grid):
    rng = np.random.default_rng(3)
    envelope = np.exp(-grid.nodes ** 2 / 8)
    for _ in range(5):
        f = Field(grid, envelope * rng.standard_normal(grid.points))
        g = Field(grid, envelope * rng.standard_normal(grid.points))
        assert sobolev_norm(f, 1.0) <= sobolev_norm(f, 2.0) <= sobolev_norm(f, 3.0)
        assert sobolev_norm(f + g, 3.0) <= sobolev_norm(f, 3.0) + sobolev_norm(g, 3.0) * (1 + 1e-14)
    assert sobolev_norm(grid.zeros(), 3.0) == 0.0


def test_embedding_constant():
    assert embedding_constant(2.0) == pytest.approx(0.5, rel=1e-14)
    assert embedding_constant(1.0) == pytest.approx(math.sqrt(0.5), rel=1e-14)
    with pytest.raises(ValueError):
        embedding_constant(0.5)


def test_embedding_bounds_sup_norm(gaussian):
    assert linf_norm(gaussian) <= embedding_constant(2.0) * sobolev_norm(gaussian, 2.0)


def test_decay_check(grid, gaussian):
    check_decay(gaussian, "eta0")
    wide = grid.sample(lambda x: np.exp(-(x / 8) ** 2))
    with pytest.raises(DecayViolation):
        check_decay(wide, "eta0")
