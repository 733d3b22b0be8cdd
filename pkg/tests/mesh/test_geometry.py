"""Tests for the :mod:`mmdg.mesh.geometry` module."""

import math

import numpy as np
import pytest
from mmdg.exceptions import MeshTanglingError
from mmdg.mesh import MeshMotion, compute_geometry, geometry_at, interpolate_motion, min_inradius


def test_compute_geometry_triangle():
    """Test :func:`mmdg.mesh.compute_geometry` on the reference triangle."""
    geometry = compute_geometry(np.array([[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]]))
    assert geometry.dimension == 2
    assert geometry.volumes[0] == pytest.approx(0.5)
    assert np.allclose(geometry.barycenters[0], [1 / 3, 1 / 3])
    assert np.allclose(geometry.normals[0], [[1 / math.sqrt(2), 1 / math.sqrt(2)], [-1.0, 0.0], [0.0, -1.0]])
    assert np.allclose(geometry.face_areas[0], [math.sqrt(2), 1.0, 1.0])
    assert geometry.inradii[0] == pytest.approx(1 / (2 + math.sqrt(2)))
    assert np.allclose(geometry.gradients[0].sum(axis=0), 0.0)


def test_compute_geometry_interval():
    """Test :func:`mmdg.mesh.compute_geometry` on an interval."""
    geometry = compute_geometry(np.array([[[1.0], [3.0]]]))
    assert geometry.volumes[0] == pytest.approx(2.0)
    assert geometry.inradii[0] == pytest.approx(1.0)
    assert np.allclose(geometry.normals[0], [[1.0], [-1.0]])
    assert np.allclose(geometry.face_areas[0], [1.0, 1.0])


def test_compute_geometry_inverted():
    """Test :func:`mmdg.mesh.compute_geometry` raises for an inverted element and reports it."""
    vertices = np.array([[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], [[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]]])
    with pytest.raises(MeshTanglingError) as exception:
        compute_geometry(vertices, time=0.25)
    assert exception.value.elements == (1,)
    assert exception.value.time == 0.25
    assert 't=2.500000e-01' in str(exception.value)


def test_reference_map(criss_cross, generator):
    """Test that :meth:`mmdg.mesh.ElementGeometry.to_reference` inverts :meth:`to_physical`."""
    geometry = compute_geometry(criss_cross.points[criss_cross.cells])
    points = generator.uniform(0.0, 0.5, (5, 2))
    physical = geometry.to_physical(points)
    assert physical.shape == (criss_cross.n_elements, 5, 2)
    assert np.allclose(geometry.to_reference(physical), points[None])


def test_mesh_motion():
    """Test :class:`mmdg.mesh.MeshMotion`."""
    start = np.array([[0.0], [1.0]])
    end = np.array([[0.0], [1.5]])
    motion = MeshMotion(start, end, 1.0, 1.5)
    assert motion.dt == pytest.approx(0.5)
    assert np.allclose(motion.velocities, [[0.0], [1.0]])
    assert not motion.is_static
    assert MeshMotion.static(start, 0.0, 1.0).is_static


@pytest.mark.parametrize(('t_start', 't_end'), ((1.0, 1.0), (1.0, 0.5)))
def test_mesh_motion_invalid(t_start, t_end):
    """Test :class:`mmdg.mesh.MeshMotion` raises for an empty step."""
    with pytest.raises(ValueError, match='invalid step interval'):
        MeshMotion(np.zeros((2, 1)), np.zeros((2, 1)), t_start, t_end)


def test_interpolate_motion():
    """Test :func:`mmdg.mesh.interpolate_motion` returns the endpoints exactly."""
    start = np.array([[0.0], [0.3]])
    end = np.array([[0.0], [0.7]])
    motion = MeshMotion(start, end, 0.1, 0.4)
    assert interpolate_motion(motion, 0.1)[0] is start
    assert interpolate_motion(motion, 0.4)[0] is end
    coordinates, velocities = interpolate_motion(motion, 0.25)
    assert np.allclose(coordinates, [[0.0], [0.5]])
    assert np.allclose(velocities, [[0.0], [4 / 3]])

    with pytest.raises(ValueError, match='outside of the step'):
        interpolate_motion(motion, 0.5)


def test_geometry_at(interval):
    """Test :func:`mmdg.mesh.geometry_at` returns per element vertex velocities."""
    end = interval.points.copy()
    end[5] += 0.02
    motion = MeshMotion(interval.points, end, 0.0, 0.1)
    geometry, velocities = geometry_at(interval, motion, 0.1)
    assert velocities.shape == (10, 2, 1)
    assert geometry.volumes.sum() == pytest.approx(1.0)
    assert geometry.volumes[4] == pytest.approx(0.12)


def test_min_inradius(interval, criss_cross):
    """Test :func:`mmdg.mesh.min_inradius`."""
    assert min_inradius(interval) == pytest.approx(0.05)
    assert min_inradius(interval, 2.0 * interval.points) == pytest.approx(0.1)
    assert min_inradius(criss_cross) > 0
