"""Tests for the :mod:`mmdg.problems.exact` module."""

import math

import numpy as np
import pytest
from mmdg.problems import (
    exact_burgers_2d,
    exact_burgers_riemann,
    exact_burgers_sine,
    exact_euler_advection,
    exact_euler_advection_2d,
)


def initial(x):
    """Return the initial data of the smooth Burgers problem."""
    return 0.5 + np.sin(np.pi * x)


def test_burgers_sine_initial():
    """Test :func:`mmdg.problems.exact_burgers_sine` returns the initial data at time zero."""
    x = np.linspace(-1.0, 3.0, 41)
    assert np.allclose(exact_burgers_sine(x, 0.0), initial(x))


@pytest.mark.parametrize('time', (0.1, 0.25, 0.3))
def test_burgers_sine_characteristics(time):
    """Test that the solution before the shock is constant along characteristics."""
    foot = np.linspace(0.0, 2.0, 33)
    x = foot + initial(foot) * time
    assert np.allclose(exact_burgers_sine(x, time), initial(foot), atol=1e-12)


def test_burgers_sine_shock():
    """Test that the shock of :func:`mmdg.problems.exact_burgers_sine` travels with the mean value."""
    time = 1.5 / math.pi
    position = 1.0 + 0.5 * time
    left = exact_burgers_sine(position - 1e-9, time)
    right = exact_burgers_sine(position + 1e-9, time)
    assert left - right > 1.0
    assert left - 0.5 == pytest.approx(0.5 - right)

    x = np.linspace(0.0, 2.0, 20001)[:-1]
    values = exact_burgers_sine(x, time)
    assert values.mean() == pytest.approx(0.5, abs=1e-3)
    assert np.all((values >= -0.5) & (values <= 1.5))


@pytest.mark.parametrize(('kwargs', 'time'), (({'amplitude': 0.0}, 0.1), ({'wavenumber': -1.0}, 0.1), ({}, -0.1)))
def test_burgers_sine_invalid(kwargs, time):
    """Test :func:`mmdg.problems.exact_burgers_sine` raises for invalid arguments."""
    with pytest.raises(ValueError):
        exact_burgers_sine(0.5, time, **kwargs)


def test_burgers_2d():
    """Test that :func:`mmdg.problems.exact_burgers_2d` reduces to a 1D problem along the diagonal."""
    points = np.array([[0.3, 0.4], [1.0, 2.5], [3.9, 0.1]])
    assert np.allclose(exact_burgers_2d(points, 0.0), 0.5 + np.sin(0.5 * np.pi * points.sum(axis=1)))
    expected = exact_burgers_sine(points.sum(axis=1), 0.4, wavenumber=0.5 * np.pi)
    assert np.allclose(exact_burgers_2d(points, 0.2), expected)


def test_burgers_riemann_shock():
    """Test :func:`mmdg.problems.exact_burgers_riemann` for a decreasing jump."""
    assert np.array_equal(exact_burgers_riemann([-0.1, 0.1], 0.0), [1.0, 0.0])
    assert np.array_equal(exact_burgers_riemann([0.49, 0.51], 1.0), [1.0, 0.0])
    assert np.array_equal(exact_burgers_riemann([1.4, 1.6], 1.0, position=1.0), [1.0, 0.0])


def test_burgers_riemann_rarefaction():
    """Test :func:`mmdg.problems.exact_burgers_riemann` for an increasing jump."""
    values = exact_burgers_riemann([-1.0, 0.5, 1.0, 3.0], 2.0, left=0.0, right=1.0)
    assert np.allclose(values, [0.0, 0.25, 0.5, 1.0])


def test_euler_advection():
    """Test :func:`mmdg.problems.exact_euler_advection`."""
    points = np.array([[0.0], [0.5], [1.25]])
    values = exact_euler_advection(points, 0.0)
    density = 1.0 + 0.2 * np.sin(np.pi * points[:, 0])
    assert values.shape == (3, 3)
    assert np.allclose(values[:, 0], density)
    assert np.allclose(values[:, 1], density)
    assert np.allclose(values[:, 2], 2.5 + 0.5 * density)
    assert np.allclose(exact_euler_advection(points + 0.3, 0.3), values)


def test_euler_advection_2d():
    """Test that :func:`mmdg.problems.exact_euler_advection_2d` translates with the velocity."""
    points = np.array([[0.1, 0.2], [1.5, 0.7]])
    values = exact_euler_advection_2d(points, 0.0)
    assert np.allclose(values[:, 1], 0.7 * values[:, 0])
    assert np.allclose(values[:, 2], 0.3 * values[:, 0])
    assert np.allclose(exact_euler_advection_2d(points + [0.35, 0.15], 0.5), values)
