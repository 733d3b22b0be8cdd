"""Tests for the :mod:`mmdg.mmpde.energy` module."""

import numpy as np
import pytest
from mmdg.exceptions import MeshTanglingError
from mmdg.mmpde import edge_matrices, energy_density, local_velocities, mesh_energy

METRIC_2D = np.array([[[2.0, 0.3], [0.3, 1.0]]])


def test_edge_matrices():
    """Test :func:`mmdg.mmpde.edge_matrices` returns the edges as columns."""
    vertices = np.array([[[1.0, 1.0], [3.0, 1.0], [1.0, 2.0]]])
    assert np.allclose(edge_matrices(vertices), [[[2.0, 0.0], [0.0, 1.0]]])


def test_energy_density_identity():
    """Test :func:`mmdg.mmpde.energy_density` for an identity map and metric."""
    assert energy_density(np.eye(2)[None], np.eye(2)[None]) == pytest.approx([2 * 2**1.5])
    assert energy_density(np.eye(1)[None], np.eye(1)[None]) == pytest.approx([2.0])


def test_energy_density_inverted():
    """Test :func:`mmdg.mmpde.energy_density` raises for an inverted computational element."""
    with pytest.raises(MeshTanglingError):
        energy_density(np.array([[[0.0, 1.0], [1.0, 0.0]]]), np.eye(2)[None])


def test_mesh_energy_inverted():
    """Test :func:`mmdg.mmpde.mesh_energy` raises for an inverted physical element."""
    physical = np.array([[[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]]])
    with pytest.raises(MeshTanglingError):
        mesh_energy(physical, physical, np.eye(2)[None])


@pytest.mark.parametrize(
    ('physical', 'computational', 'metric'),
    (
        (
            np.array([[[0.1, 0.0], [1.2, 0.1], [0.2, 0.9]]]),
            np.array([[[0.0, 0.0], [1.0, 0.2], [-0.1, 1.1]]]),
            METRIC_2D,
        ),
        (np.array([[[0.0], [0.7]]]), np.array([[[0.1], [1.0]]]), np.array([[[3.0]]])),
    ),
)
def test_local_velocities_gradient(physical, computational, metric):
    """Test that :func:`mmdg.mmpde.local_velocities` times the volume is minus the gradient of the functional."""
    volume = abs(np.linalg.det(edge_matrices(physical))[0]) / (1 if physical.shape[-1] == 1 else 2)
    velocities = local_velocities(physical, computational, metric)[0]
    step = 1e-6

    gradient = np.zeros_like(computational[0])
    for vertex in range(computational.shape[1]):
        for axis in range(computational.shape[2]):
            plus = np.array(computational)
            minus = np.array(computational)
            plus[0, vertex, axis] += step
            minus[0, vertex, axis] -= step
            difference = mesh_energy(physical, plus, metric) - mesh_energy(physical, minus, metric)
            gradient[vertex, axis] = difference / (2 * step)

    assert np.allclose(volume * velocities, -gradient, rtol=1e-5, atol=1e-7)
    assert np.allclose(velocities.sum(axis=0), 0.0)
