"""Tests for the :mod:`mmdg.solver.state` module."""

import numpy as np
import pytest
from mmdg.approx import build_basis
from mmdg.mesh import compute_geometry
from mmdg.solver import evaluate_function, project_initial


def quadratic(points):
    """Return a quadratic polynomial of the coordinates."""
    x, y = points[..., 0], points[..., 1]
    return 1.0 + 2.0 * x - y + 0.5 * x * y


def test_project_initial_exact(criss_cross, generator):
    """Test :func:`mmdg.solver.project_initial` reproduces polynomials of the degree of the basis."""
    state = project_initial(quadratic, criss_cross, build_basis(2, 2), 1, time=0.3)
    assert state.time == 0.3
    assert state.coefficients.shape == (criss_cross.n_elements, 6, 1)

    points = generator.uniform(0.0, 0.5, (4, 2))
    geometry = compute_geometry(criss_cross.points[criss_cross.cells])
    assert np.allclose(state.evaluate(points)[..., 0], quadratic(geometry.to_physical(points)))


def test_averages(interval):
    """Test :meth:`mmdg.solver.DGState.averages` returns the cell averages."""
    state = project_initial(lambda points: points[..., 0], interval, build_basis(1, 1), 1)
    geometry = compute_geometry(interval.points[interval.cells])
    assert np.allclose(state.averages()[:, 0], geometry.barycenters[:, 0])
    assert state.n_components == 1


def test_project_initial_coordinates(interval):
    """Test :func:`mmdg.solver.project_initial` on moved coordinates."""
    coordinates = 2.0 * interval.points
    state = project_initial(lambda points: points[..., 0], interval, build_basis(1, 2), 1, coordinates=coordinates)
    assert state.averages()[0, 0] == pytest.approx(0.1)


def test_replace(interval):
    """Test :meth:`mmdg.solver.DGState.replace`."""
    state = project_initial(lambda points: np.ones(points.shape[:-1]), interval, build_basis(1, 1), 1, time=1.0)
    replaced = state.replace(2 * state.coefficients)
    assert replaced.time == 1.0
    assert replaced.basis is state.basis
    assert np.allclose(replaced.averages(), 2.0)
    assert state.replace(state.coefficients, time=2.0).time == 2.0


def test_evaluate_function_components():
    """Test :func:`mmdg.solver.evaluate_function` raises for the wrong number of components."""
    points = np.zeros((3, 2, 1))
    assert evaluate_function(lambda points: points[..., 0], points, 1).shape == (3, 2, 1)
    with pytest.raises(ValueError, match='expected 3'):
        evaluate_function(lambda points: np.zeros((*points.shape[:-1], 2)), points, 3)
