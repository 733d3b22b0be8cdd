"""Tests for the :mod:`mmdg.mesh.locate` module."""

import logging

import numpy as np
import pytest
from mmdg.mesh import barycentric, locate_point, locate_points


def test_barycentric():
    """Test :func:`mmdg.mesh.barycentric`."""
    vertices = np.array([[[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]]])
    assert np.allclose(barycentric(vertices, np.array([[2 / 3, 2 / 3]])), 1 / 3)
    assert np.allclose(barycentric(vertices, np.array([[2.0, 0.0]])), [[0.0, 1.0, 0.0]])


def test_locate_points(criss_cross, generator):
    """Test :func:`mmdg.mesh.locate_points` finds the elements containing random points."""
    points = generator.uniform(0.0, 1.0, (50, 2))
    elements, weights, outside = locate_points(criss_cross, criss_cross.points, points)
    assert not outside.any()
    assert np.all(weights >= -1e-12)
    assert np.allclose(weights.sum(axis=1), 1.0)
    assert np.allclose(np.einsum('pa,pad->pd', weights, criss_cross.points[criss_cross.cells[elements]]), points)


def test_locate_points_moved(criss_cross):
    """Test :func:`mmdg.mesh.locate_points` on a deformed mesh starting from distant guesses."""
    coordinates = criss_cross.points + 0.05 * np.sin(np.pi * criss_cross.points[:, ::-1])
    points = np.array([[0.1, 0.9], [0.9, 0.1], [0.5, 0.5]])
    guesses = np.full(len(points), criss_cross.n_elements - 1)
    elements, weights, outside = locate_points(criss_cross, coordinates, points, guesses)
    assert not outside.any()
    assert np.allclose(np.einsum('pa,pad->pd', weights, coordinates[criss_cross.cells[elements]]), points)


def test_locate_point_outside(criss_cross, caplog):
    """Test :func:`mmdg.mesh.locate_point` projects a point outside of the domain onto the closest element."""
    with caplog.at_level(logging.WARNING):
        element, weights, outside = locate_point(criss_cross, criss_cross.points, [1.5, 0.5])
    assert outside
    assert np.all(weights >= 0)
    assert weights.sum() == pytest.approx(1.0)
    assert criss_cross.points[criss_cross.cells[element], 0].max() == pytest.approx(1.0)
    assert 'outside of the domain' in caplog.text


def test_locate_point_interval(interval):
    """Test :func:`mmdg.mesh.locate_point` on an interval."""
    element, weights, outside = locate_point(interval, interval.points, [0.35])
    assert not outside
    assert element == 3
    assert np.allclose(weights, [0.5, 0.5])
