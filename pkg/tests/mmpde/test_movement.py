"""Tests for the :mod:`mmdg.mmpde.movement` module."""

import numpy as np
import pytest
from mmdg.approx import build_basis
from mmdg.exceptions import ConfigurationError, MeshTanglingError
from mmdg.mesh import VERTEX_FIXED, compute_geometry, generate_interval
from mmdg.mmpde import (
    ComputationalMesh,
    MeshEnergyParams,
    MeshMover,
    MetricField,
    mesh_energy,
    mesh_velocities,
    step_mesh,
)
from mmdg.physics import Burgers
from mmdg.solver import project_initial


def identity(mesh):
    """Return the identity metric on the vertices of a mesh."""
    return MetricField(np.tile(np.eye(mesh.dimension), (mesh.n_vertices, 1, 1)))


def perturbed(mesh, generator, size=0.03):
    """Return the vertex coordinates of a mesh with a small random perturbation respecting the boundary."""
    return mesh.constrain_to_boundary(mesh.points + generator.uniform(-size, size, mesh.points.shape))


@pytest.mark.parametrize(
    'kwargs',
    (
        {'tau': 0.0},
        {'tau': 0.1, 'beta': -1.0},
        {'tau': 0.1, 'sweeps': -1},
        {'tau': 0.1, 'substeps': 0},
        {'tau': 0.1, 'integrator': 'rk4'},
    ),
)
def test_params_invalid(kwargs):
    """Test :class:`mmdg.mmpde.MeshEnergyParams` raises for invalid values."""
    with pytest.raises(ConfigurationError):
        MeshEnergyParams(**kwargs)


def test_params_defaults():
    """Test the defaults of :class:`mmdg.mmpde.MeshEnergyParams`."""
    params = MeshEnergyParams(tau=0.1)
    assert params.beta == 10.0
    assert params.sweeps == 3
    assert params.integrator == 'euler'
    assert params.substeps == 5
    assert params.max_halvings == 10


def test_computational_mesh(criss_cross):
    """Test :class:`mmdg.mmpde.ComputationalMesh`."""
    computational = ComputationalMesh.from_mesh(criss_cross)
    assert computational.reference is not criss_cross.points
    assert computational.volume == pytest.approx(1.0)
    assert computational.is_valid(criss_cross.points)

    flipped = np.array(criss_cross.points)
    flipped[:, 0] *= -1
    assert not computational.is_valid(flipped)


def test_equidistribution(criss_cross):
    """Test the equidistribution diagnostic of a uniform mesh and a constant metric."""
    computational = ComputationalMesh.from_mesh(criss_cross)
    report = computational.equidistribution(criss_cross.points, identity(criss_cross).scaled(4.0))
    assert report.sigma == pytest.approx(4.0)
    assert report.computational_volume == pytest.approx(1.0)
    assert report.variation == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize('fixture', ('criss_cross', 'periodic_criss_cross', 'interval'))
def test_velocities_at_rest(request, fixture):
    """Test that a uniform mesh for a constant metric is a stationary point of the flow."""
    mesh = request.getfixturevalue(fixture)
    velocities = mesh_velocities(mesh, mesh.points, mesh.points, identity(mesh), 0.1)
    assert np.allclose(velocities, 0.0, atol=1e-10)


def test_velocities_scaling(periodic_criss_cross, generator):
    """Test that the mesh velocities do not change when the metric is multiplied by a constant."""
    mesh = periodic_criss_cross
    physical = perturbed(mesh, generator)
    diagonal = generator.uniform(1.0, 3.0, (mesh.n_vertices, 2))
    metric = MetricField(np.einsum('ni,ij->nij', diagonal, np.eye(2))[mesh.vertex_mates])
    expected = mesh_velocities(mesh, physical, mesh.points, metric, 0.1)
    assert np.abs(expected).max() > 0
    assert np.allclose(mesh_velocities(mesh, physical, mesh.points, metric.scaled(7.0), 0.1), expected)


def test_velocities_constraints(criss_cross, generator):
    """Test that fixed vertices have zero velocity and periodic mates share theirs."""
    physical = perturbed(criss_cross, generator)
    velocities = mesh_velocities(criss_cross, physical, criss_cross.points, identity(criss_cross), 0.1)
    assert np.all(velocities[criss_cross.vertex_kinds == VERTEX_FIXED] == 0.0)
    assert np.abs(velocities).max() > 0


@pytest.mark.parametrize('integrator', ('bdf', 'euler'))
def test_step_at_rest(periodic_criss_cross, integrator):
    """Test that :meth:`mmdg.mmpde.MeshMover.step` leaves a uniform mesh in place for a constant metric."""
    mesh = periodic_criss_cross
    mover = MeshMover(mesh, Burgers(2), MeshEnergyParams(tau=0.1, integrator=integrator))
    result = mover.step(mesh.points, identity(mesh), 0.05)
    assert np.allclose(result, mesh.points, atol=1e-8)
    assert mover.frozen_steps == 0
def test_remap_identity(criss_cross, generator):
    """Test that :meth:`mmdg.mmpde.MeshMover.remap` returns the physical mesh for the reference computational mesh."""
    mover = MeshMover(criss_cross, Burgers(2), MeshEnergyParams(tau=0.1))
    physical = perturbed(criss_cross, generator)
    assert np.allclose(mover.remap(physical, criss_cross.points), physical)


def test_remap_repeated(criss_cross, generator):
    """Test that repeated calls of :meth:`mmdg.mmpde.MeshMover.remap` agree with a mover used for the first time."""
    mover = MeshMover(criss_cross, Burgers(2), MeshEnergyParams(tau=0.1))
    physical = perturbed(criss_cross, generator)
    mover.remap(physical, perturbed(criss_cross, generator))

    computational = perturbed(criss_cross, generator)
    expected = MeshMover(criss_cross, Burgers(2), MeshEnergyParams(tau=0.1)).remap(physical, computational)
    assert np.allclose(mover.remap(physical, computational), expected, atol=1e-12)


def test_step_frozen(interval, monkeypatch):
    """Test that the mesh is frozen when the flow yields no valid computational mesh."""
    mover = MeshMover(interval, Burgers(1), MeshEnergyParams(tau=0.1))
    monkeypatch.setattr(mover, 'flow', lambda physical, metric, dt: None)
    result = mover.step(interval.points, identity(interval), 0.01)
    assert np.array_equal(result, interval.points)
    assert result is not interval.points
    assert mover.frozen_steps == 1


def test_step_tangled(interval, monkeypatch):
    """Test that an inverted physical mesh after the movement raises."""
    mover = MeshMover(interval, Burgers(1), MeshEnergyParams(tau=1e-9))
    monkeypatch.setattr(mover, 'remap', lambda physical, computational: physical[::-1])
    with pytest.raises(MeshTanglingError):
        mover.step(interval.points, identity(interval), 0.01, time=0.5)


@pytest.mark.parametrize(('tau', 'dt', 'weight'), ((0.1, 0.1, 0.5), (0.1, 0.3, 0.75), (1e-3, 9e-3, 0.9)))
def test_step_relaxation(interval, monkeypatch, tau, dt, weight):
    """Test that :meth:`mmdg.mmpde.MeshMover.step` moves the mesh part of the way to the mapped mesh."""
    mover = MeshMover(interval, Burgers(1), MeshEnergyParams(tau=tau))
    target = np.array(interval.points, copy=True)
    target[1:-1] += 0.02
    monkeypatch.setattr(mover, 'remap', lambda physical, computational: target)

    assert mover.relaxation(dt) == pytest.approx(weight)
    result = mover.step(interval.points, identity(interval), dt)
    assert np.allclose(result, interval.points + weight * (target - interval.points), atol=1e-14)


def test_flow_halving_budget(interval, monkeypatch):
    """Test that the halving budget of the explicit integrator applies to every sub-step separately."""
    outcomes = iter([False, False, True, False, False])
    monkeypatch.setattr(ComputationalMesh, 'is_valid', lambda self, coordinates: next(outcomes, True))
    mover = MeshMover(interval, Burgers(1), MeshEnergyParams(tau=0.1, integrator='euler', max_halvings=2))

    result = mover.flow(interval.points, identity(interval), 0.01)
    assert result is not None
    assert np.allclose(result, interval.points, atol=1e-12)


def test_flow_halving_exhausted(interval, monkeypatch):
    """Test that the explicit integrator gives up after too many halvings of one sub-step."""
    outcomes = iter([True, False, False, False])
    monkeypatch.setattr(ComputationalMesh, 'is_valid', lambda self, coordinates: next(outcomes, True))
    mover = MeshMover(interval, Burgers(1), MeshEnergyParams(tau=0.1, integrator='euler', max_halvings=2))
    assert mover.flow(interval.points, identity(interval), 0.01) is None


def test_flow_two_elements():
    """Test that the flow equidistributes ``h sqrt(M_K)`` on two elements with a piecewise constant metric.

    The element metrics are 1 and 4, so the stationary computational mesh splits ``[0, 1]`` at ``1/3`` and the mapped
    physical vertex is ``0.5 + (0.5 - 1/3) / (2/3) * 0.5 = 0.625``.
    """
    mesh = generate_interval(2, 0.0, 1.0)
    metric = MetricField(np.array([1.0, 1.0, 7.0]).reshape(3, 1, 1))
    mover = MeshMover(mesh, Burgers(1), MeshEnergyParams(tau=0.1, integrator='bdf'))

    computational = mover.flow(mesh.points, metric, 10.0)
    assert computational[1, 0] == pytest.approx(1 / 3, abs=1e-5)
    assert mover.remap(mesh.points, computational)[1, 0] == pytest.approx(0.625, abs=1e-5)


def test_flow_energy_decreases(interval):
    """Test that the meshing functional decreases along explicit sub-steps of the gradient flow."""
    metric = MetricField((1.0 + 3.0 * interval.points[:, 0]).reshape(-1, 1, 1))
    mover = MeshMover(interval, Burgers(1), MeshEnergyParams(tau=1.0))
    cells = interval.cells
    averages = metric.element_average(cells)

    current = np.array(interval.points, copy=True)
    energies = [mesh_energy(interval.points[cells], current[cells], averages)]
    for _ in range(20):
        current = interval.constrain_to_boundary(current + 1e-3 * mover.velocities(interval.points, current, metric))
        energies.append(mesh_energy(interval.points[cells], current[cells], averages))

    assert np.all(np.diff(energies) < 0)


def test_step_equidistribution(interval):
    """Test that repeated steps for a steady metric reduce the dispersion of ``|K| sqrt(det M_K)`` to below 1e-3."""
    mover = MeshMover(interval, Burgers(1), MeshEnergyParams(tau=0.01, integrator='bdf'))

    def metric(coordinates):
        """Return the steady metric ``1 + 3 x`` at the vertices."""
        return MetricField((1.0 + 3.0 * coordinates[:, 0]).reshape(-1, 1, 1))

    physical = np.array(interval.points, copy=True)
    variations = [mover.computational.equidistribution(physical, metric(physical)).variation]
    for _ in range(8):
        physical = mover.step(physical, metric(physical), 1.0)
        variations.append(mover.computational.equidistribution(physical, metric(physical)).variation)

    for before, after in zip(variations, variations[1:]):
        if before > 1e-3:
            assert after < before
    assert variations[-1] < 1e-3


@pytest.mark.parametrize('integrator', ('bdf', 'euler'))
def test_step_mesh_front(integrator):
    """Test that :func:`mmdg.mmpde.step_mesh` concentrates elements at a steep front."""
    mesh = generate_interval(20, 0.0, 1.0)
    state = project_initial(
        lambda points: np.tanh((points[..., 0] - 0.5) / 0.05), mesh, build_basis(1, 1), 1, time=0.0
    )
    mover = MeshMover(mesh, Burgers(1), MeshEnergyParams(tau=1e-3, integrator=integrator))
    result = step_mesh(mover, mesh.points, state, 1e-3)

    assert mover.frozen_steps == 0
    assert np.array_equal(result[[0, 20]], mesh.points[[0, 20]])
    geometry = compute_geometry(result[mesh.cells])
    assert np.all(geometry.volumes > 0)
    assert geometry.volumes.sum() == pytest.approx(1.0)
    assert geometry.volumes.min() < 0.05
    assert abs(geometry.barycenters[np.argmin(geometry.volumes), 0] - 0.5) < 0.2
