import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from polyfock.errors import CapacityError, ParameterError
from polyfock.grid import make_time_grid
from polyfock.hermite import gaussian_window, hermite_function
from polyfock.lattice import (adjoint_lattice, commutation_residual, density, enumerate_points,
                              lattice_from_matrix, rect_lattice, same_point_set, square_lattice,
                              square_of_density)


@pytest.fixture(scope="module")
def g0():
    return gaussian_window(make_time_grid(6, 768))


def test_identity_is_z2():
    L = lattice_from_matrix(np.eye(2))
    pts = enumerate_points(L, 1.5)
    assert len(pts) == 9
    assert np.array_equal(pts.points, pts.indices.astype(float))


def test_rectangular():
    L = lattice_from_matrix(np.diag([0.5, 2.0]))
    assert L == rect_lattice(0.5, 2.0)
    assert set(map(tuple, enumerate_points(L, 2.1).points.tolist())) >= {(0.5, 2.0), (-2.0, 0.0)}


@pytest.mark.parametrize("A", [np.zeros((2, 2)), [[1, 2], [2, 4]], np.eye(3), [[np.nan, 0], [0, 1]]])
def test_bad_generators(A):
    with pytest.raises(ParameterError):
        lattice_from_matrix(A)


def test_densities():
    assert density(lattice_from_matrix(np.eye(2))) == 1
    assert density(square_lattice(0.5)) == 4
    assert abs(density(lattice_from_matrix([[1, 0.5], [0, 1]])) - 1) < 1e-15
    assert abs(density(square_of_density(2.5)) - 2.5) < 1e-12
    with pytest.raises(ParameterError):
        square_of_density(0)


def test_adjoint_of_rect():
    a, b = 0.8, 0.6
    adj = adjoint_lattice(rect_lattice(a, b))
    ref = rect_lattice(1 / b, 1 / a)
    assert same_point_set(enumerate_points(adj, 6), enumerate_points(ref, 6))


def test_double_adjoint():
    L = lattice_from_matrix([[0.7, 0.2], [-0.1, 0.9]])
    assert same_point_set(enumerate_points(adjoint_lattice(adjoint_lattice(L)), 5), enumerate_points(L, 5))


def _random_generator(seed):
    rng = np.random.default_rng(seed)
    while True:
        A = rng.uniform(-1.5, 1.5, size=(2, 2))
        if abs(np.linalg.det(A)) > 0.1:
            return A


@given(st.integers(0, 2 ** 32 - 1))
def test_reciprocal_density(seed):
    L = lattice_from_matrix(_random_generator(seed))
    assert abs(density(adjoint_lattice(L)) * density(L) - 1) < 1e-12


@given(st.integers(0, 2 ** 32 - 1))
def test_enumeration_symmetric(seed):
    pts = enumerate_points(lattice_from_matrix(_random_generator(seed)), 3.0)
    assert np.all(np.hypot(*pts.points.T) <= 3.0 * (1 + 1e-12))
    assert same_point_set(pts, type(pts)(-pts.points, -pts.indices, pts.radius, pts.source))
    assert len(np.unique(pts.indices, axis=0)) == len(pts)


def test_enumeration_lexicographic():
    idx = enumerate_points(square_lattice(0.7), 4).indices
    assert [tuple(r) for r in idx] == sorted(tuple(r) for r in idx)


@pytest.mark.parametrize("D", [0.5, 1.0, 2.5])
def test_point_count(D):
    # lattice-point counting: area times density
    L = lattice_from_matrix(np.array([[1, 0.3], [0, 1]]) / math.sqrt(D))
    for r in (10, 14):
        assert abs(len(enumerate_points(L, r)) / (math.pi * r * r * D) - 1) < 0.1


def test_small_radius():
    assert enumerate_points(square_lattice(1), 0.5).points.tolist() == [[0.0, 0.0]]
    with pytest.raises(ParameterError):
        enumerate_points(square_lattice(1), 0)


def test_capacity():
    with pytest.raises(CapacityError):
        enumerate_points(square_of_density(5000), 10)
    with pytest.raises(CapacityError):
        enumerate_points(square_lattice(1), 20, cap=100)


def test_commutation_examples(g0):
    Z = square_lattice(1)
    assert commutation_residual(Z, (1, 1), g0) < 1e-10
    assert abs(commutation_residual(Z, (0.5, 0), g0) - 2) < 1e-8
    assert commutation_residual(Z, (0, 0), g0) == 0.0


def test_adjoint_points_commute(g0):
    L = lattice_from_matrix([[0.9, 0.3], [0.0, 1.2]])
    for mu in enumerate_points(adjoint_lattice(L), 3).points:
        assert commutation_residual(L, mu, g0) < 1e-9


def test_non_adjoint_point_detected():
    g = hermite_function(1, make_time_grid(6, 768))
    assert commutation_residual(square_lattice(1), (0.25, 0.5), g) > 0.5
