"""Tests for the :mod:`mmdg.solver.boundary` module."""

import numpy as np
from mmdg.physics import Burgers, Euler
from mmdg.solver import DirichletBoundary, OutflowBoundary, ReflectiveBoundary, SplitBoundary

POINTS = np.array([[0.0, 0.0], [1.0, 0.0]])
NORMALS = np.array([[0.0, -1.0], [1.0, 0.0]])


def test_outflow():
    """Test :class:`mmdg.solver.OutflowBoundary` copies the interior trace."""
    interior = np.array([[1.0, 2.0, 3.0, 4.0], [5.0, 6.0, 7.0, 8.0]])
    exterior = OutflowBoundary().exterior(Euler(2), interior, POINTS, NORMALS, 0.0)
    assert np.array_equal(exterior, interior)
    assert exterior is not interior


def test_reflective():
    """Test :class:`mmdg.solver.ReflectiveBoundary` mirrors the normal momentum."""
    law = Euler(2)
    interior = law.from_primitive(np.array([[1.0, 0.3, -0.5, 1.0], [1.0, 0.3, -0.5, 1.0]]))
    exterior = law.to_primitive(ReflectiveBoundary().exterior(law, interior, POINTS, NORMALS, 0.0))
    assert np.allclose(exterior[0], [1.0, 0.3, 0.5, 1.0])
    assert np.allclose(exterior[1], [1.0, -0.3, -0.5, 1.0])


def test_reflective_scalar():
    """Test :class:`mmdg.solver.ReflectiveBoundary` copies the trace of a scalar law."""
    interior = np.array([[0.5], [-1.0]])
    assert np.array_equal(ReflectiveBoundary().exterior(Burgers(2), interior, POINTS, NORMALS, 0.0), interior)


def test_dirichlet():
    """Test :class:`mmdg.solver.DirichletBoundary` evaluates its function at the points and time."""
    condition = DirichletBoundary(lambda points, time: points[:, 0] + time)
    exterior = condition.exterior(Burgers(2), np.zeros((2, 1)), POINTS, NORMALS, 2.0)
    assert np.allclose(exterior, [[2.0], [3.0]])


def test_split():
    """Test :class:`mmdg.solver.SplitBoundary` selects the condition per point."""
    condition = SplitBoundary(
        lambda points, time: points[:, 0] < 0.5,
        DirichletBoundary(lambda points, time: np.full(len(points), 7.0)),
        OutflowBoundary(),
    )
    exterior = condition.exterior(Burgers(2), np.array([[1.0], [2.0]]), POINTS, NORMALS, 0.0)
    assert np.allclose(exterior, [[7.0], [2.0]])
