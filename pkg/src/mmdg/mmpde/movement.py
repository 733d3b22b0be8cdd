"""Moving mesh PDE in the computational coordinate formulation.

Every time step starts from the reference computational mesh, which is the initial physical mesh. The computational
vertices are moved by the gradient flow of the meshing functional while the physical mesh is held fixed; the new
physical mesh is the piecewise linear map from the new computational mesh onto the old physical mesh, evaluated at the
reference computational vertices.

The physical mesh does not jump to that mapped mesh. It takes the implicit Euler step of ``dx/dt = (x_map - x) / tau``
towards it, so the mesh velocity is bounded by the distance to the mapped mesh over ``tau``.
"""

from __future__ import annotations

import dataclasses
import logging
import typing as t

import numpy as np
from scipy import integrate, sparse

from ..exceptions import ConfigurationError, MeshTanglingError
from ..mesh import VERTEX_FIXED, VERTEX_SLIDING, compute_geometry, locate_points
from .energy import edge_matrices, local_velocities
from .metric import MetricField, compute_metric

if t.TYPE_CHECKING:
    from ..mesh import Mesh
    from ..physics import ConservationLaw
    from ..solver import DGState

__all__ = (
    'ComputationalMesh',
    'EquidistributionReport',
    'MeshEnergyParams',
    'MeshMover',
    'mesh_velocities',
    'step_mesh',
)

_LOGGER = logging.getLogger(__name__)

Integrator = t.Literal['bdf', 'euler']

MAX_SUBSTEPS = 10_000
"""Number of trial sub-steps of the explicit integrator within one time step."""


@dataclasses.dataclass(frozen=True)
class MeshEnergyParams:
    """Parameters of the mesh movement."""

    tau: float
    """Time scale of the gradient flow."""

    beta: float = 10.0
    """Weight of the density and energy ratios in the adaptation scalar of the Euler equations."""

    sweeps: int = 3
    """Number of low-pass filter sweeps applied to the metric."""

    integrator: Integrator = 'euler'
    """Integrator of the gradient flow: explicit ``euler`` sub-steps or implicit ``bdf``."""

    substeps: int = 5
    """Number of equal sub-steps of the explicit integrator."""

    max_halvings: int = 10
    """Number of consecutive halvings of a single sub-step after inverted computational elements before the mesh is
    frozen."""

    def __post_init__(self) -> None:
        if not self.tau > 0:
            raise ConfigurationError(f'mesh time scale should be positive, got {self.tau}')
        if self.beta < 0:
            raise ConfigurationError(f'adaptation parameter should be nonnegative, got {self.beta}')
        if self.sweeps < 0 or self.substeps < 1 or self.max_halvings < 0:
            raise ConfigurationError('sweeps and halvings should be nonnegative and sub-steps positive')
        if self.integrator not in t.get_args(Integrator):
            raise ConfigurationError(f'unknown integrator `{self.integrator}`')


@dataclasses.dataclass(frozen=True)
class EquidistributionReport:
    """How evenly the metric weighted element volumes ``|K| sqrt(det M_K)`` are distributed."""

    sigma: float
    """The sum ``sigma_h`` of the weighted volumes."""

    computational_volume: float
    """The measure of the computational domain."""

    variation: float
    """Coefficient of variation of the weighted volumes, zero for an equidistributed mesh."""


@dataclasses.dataclass(frozen=True, eq=False)
class ComputationalMesh:
    """Computational mesh sharing the connectivity of the physical mesh."""

    mesh: Mesh
    reference: np.ndarray
    """Reference computational coordinates, the initial physical mesh."""

    @classmethod
    def from_mesh(cls, mesh: Mesh) -> ComputationalMesh:
        """Return the computational mesh whose reference coordinates are the initial physical coordinates."""
        return cls(mesh=mesh, reference=np.array(mesh.points, copy=True))

    @property
    def volume(self) -> float:
        """Return ``|Omega_c|``."""
        return self.mesh.domain_volume(self.reference)

    def is_valid(self, coordinates: np.ndarray) -> bool:
        """Return whether every element has positive volume at the given coordinates."""
        return bool(np.all(np.linalg.det(edge_matrices(coordinates[self.mesh.cells])) > 0.0))

    def equidistribution(self, physical: np.ndarray, metric: MetricField) -> EquidistributionReport:
        """Return the equidistribution diagnostic of a physical mesh for a metric."""
        geometry = compute_geometry(physical[self.mesh.cells])
        determinants = np.linalg.det(metric.element_average(self.mesh.cells))
        weighted = geometry.volumes * np.sqrt(determinants)
        return EquidistributionReport(
            sigma=float(weighted.sum()),
            computational_volume=self.volume,
            variation=float(weighted.std() / weighted.mean()),
        )


def _constrain_velocities(mesh: Mesh, velocities: np.ndarray) -> np.ndarray:
    """Combine the velocities of periodic mates and remove the components leaving the boundary."""
    classes = np.zeros_like(velocities)
    np.add.at(classes, mesh.vertex_mates, velocities)
    result = classes[mesh.vertex_mates]

    result[mesh.vertex_kinds == VERTEX_FIXED] = 0.0
    sliding = mesh.vertex_kinds == VERTEX_SLIDING
    tangents = mesh.vertex_tangents[sliding]
    result[sliding] = np.sum(result[sliding] * tangents, axis=1, keepdims=True) * tangents
    return result


def mesh_velocities(
    mesh: Mesh, physical: np.ndarray, computational: np.ndarray, metric: MetricField, tau: float
) -> np.ndarray:
    """Return the velocities ``d xi_j / dt = P_j / tau sum_{K in omega_j} |K| v_jK`` of the computational vertices.

    ``P_j = det(M(x_j))^(1/4)`` makes the velocities invariant under a constant scaling of the metric. Periodic mates
    are tied to one unknown and receive the sum of their contributions. Fixed vertices do not move and sliding vertices
    only move along their boundary segment.

    :param mesh: the mesh providing the connectivity.
    :param physical: physical vertex coordinates.
    :param computational: computational vertex coordinates.
    :param metric: the metric tensor at the physical vertices.
    :param tau: time scale of the flow.
    :return: velocities of shape ``(n_vertices, d)``.
    """
    cells = mesh.cells
    vertices = physical[cells]
    local = local_velocities(vertices, computational[cells], metric.element_average(cells))
    volumes = np.linalg.det(edge_matrices(vertices))
    volumes = volumes / (1.0 if mesh.dimension == 1 else 2.0)

    assembled = np.zeros_like(physical, dtype=float)
    np.add.at(assembled, cells, volumes[:, None, None] * local)
    balance = metric.determinants**0.25
    return _constrain_velocities(mesh, balance[:, None] * assembled / tau)


def _jacobian_sparsity(mesh: Mesh) -> sparse.csr_matrix:
    """Return the sparsity pattern of the derivative of the mesh velocities with respect to the coordinates."""
    n = mesh.n_vertices
    same_class = sparse.csr_matrix((np.ones(n), (np.arange(n), mesh.vertex_mates)), shape=(n, n))
    same_class = (same_class @ same_class.T).tocsr()
    coupling = same_class @ (mesh.vertex_adjacency + sparse.identity(n, format='csr')) @ same_class
    coupling.data[:] = 1.0
    return sparse.kron(coupling, np.ones((mesh.dimension, mesh.dimension)), format='csr')


class MeshMover:
    """Moves the physical mesh once per time step following the solution dependent metric."""

    def __init__(self, mesh: Mesh, law: ConservationLaw, params: MeshEnergyParams):
        """Construct the mover.

        :param mesh: the mesh, whose initial coordinates define the reference computational mesh.
        :param law: the conservation law, selecting how the metric is computed.
        :param params: the movement parameters.
        """
        self.mesh = mesh
        self.law = law
        self.params = params
        self.computational = ComputationalMesh.from_mesh(mesh)
        self.frozen_steps = 0
        self._sparsity: sparse.csr_matrix | None = None
        self._located: np.ndarray | None = None

    def metric(self, state: DGState, coordinates: np.ndarray) -> MetricField:
        """Return the smoothed metric of a solution on the mesh at the given coordinates."""
        return compute_metric(self.mesh, coordinates, state, self.law, self.params.beta, self.params.sweeps)

    def velocities(self, physical: np.ndarray, computational: np.ndarray, metric: MetricField) -> np.ndarray:
        """Return the computational mesh velocities."""
        return mesh_velocities(self.mesh, physical, computational, metric, self.params.tau)

    def _integrate_bdf(self, physical: np.ndarray, metric: MetricField, dt: float) -> np.ndarray | None:
        """Integrate the gradient flow with an implicit multistep method, ``None`` if it fails."""
        if self._sparsity is None:
            self._sparsity = _jacobian_sparsity(self.mesh)
        shape = self.computational.reference.shape
        scale = float(np.ptp(self.computational.reference, axis=0).max())

        def rhs(_: float, y: np.ndarray) -> np.ndarray:
            return self.velocities(physical, y.reshape(shape), metric).ravel()

        try:
            solution = integrate.solve_ivp(
                rhs,
                (0.0, dt),
                self.computational.reference.ravel(),
                method='BDF',
                jac_sparsity=self._sparsity,
                rtol=1e-6,
                atol=1e-9 * scale,
            )
        except (np.linalg.LinAlgError, ValueError) as exception:
            _LOGGER.debug('implicit mesh flow raised: %s', exception)
            return None

        if not solution.success:
            _LOGGER.debug('implicit mesh flow failed: %s', solution.message)
            return None

        result = self.mesh.constrain_to_boundary(solution.y[:, -1].reshape(shape))
        return result if self.computational.is_valid(result) else None

    def _integrate_euler(self, physical: np.ndarray, metric: MetricField, dt: float) -> np.ndarray | None:
        """Integrate the gradient flow with explicit sub-steps, halving them on inversion, ``None`` if that fails.

        A halved sub-step size is kept for the rest of the interval. The halving budget applies to each sub-step
        separately and is restored after every accepted sub-step. At most :data:`MAX_SUBSTEPS` trials are made.
        """
        current = np.array(self.computational.reference, copy=True)
        size = dt / self.params.substeps
        elapsed = 0.0
        halvings = 0

        for _ in range(MAX_SUBSTEPS):
            if elapsed >= dt * (1 - 1e-12):
                return current
            step = min(size, dt - elapsed)
            trial = self.mesh.constrain_to_boundary(current + step * self.velocities(physical, current, metric))
            if self.computational.is_valid(trial):
                current = trial
                elapsed += step
                halvings = 0
                continue
            halvings += 1
            if halvings > self.params.max_halvings:
                return None
            size /= 2
            _LOGGER.debug('inverted computational element, halving the sub-step to %.3e', size)

        _LOGGER.debug('explicit mesh flow did not reach the end of the step in %d sub-steps', MAX_SUBSTEPS)
        return None

    def flow(self, physical: np.ndarray, metric: MetricField, dt: float) -> np.ndarray | None:
        """Return the computational coordinates after integrating the gradient flow over ``dt``.

        The explicit integrator is also the fallback of the implicit one.

        :return: the coordinates, or ``None`` if no valid computational mesh was obtained.
        """
        if self.params.integrator == 'bdf':
            result = self._integrate_bdf(physical, metric, dt)
            if result is not None:
                return result
            _LOGGER.debug('falling back to explicit sub-steps for the mesh flow')
        return self._integrate_euler(physical, metric, dt)

    def remap(self, physical: np.ndarray, computational: np.ndarray) -> np.ndarray:
        """Return ``x_j = psi_h(xi_hat_j)`` for the piecewise linear map from the computational onto the physical mesh.

        :param physical: the physical coordinates, the nodal values of the map.
        :param computational: the computational coordinates defining the elements of the map.
        """
        if self._located is None:
            indptr, indices = self.mesh.vertex_elements
            guesses = indices[indptr[:-1]]
        else:
            guesses = self._located
        elements, weights, _ = locate_points(self.mesh, computational, self.computational.reference, guesses)
        self._located = elements
        result = np.einsum('pa,pad->pd', weights, physical[self.mesh.cells[elements]])
        return self.mesh.constrain_to_boundary(result)

    def relaxation(self, dt: float) -> float:
        """Return the weight ``dt / (dt + tau)`` of the mapped mesh in the physical mesh update."""
        return dt / (dt + self.params.tau)

    def step(self, physical: np.ndarray, metric: MetricField, dt: float, time: float | None = None) -> np.ndarray:
        """Return the physical coordinates after one step of the mesh movement.

        The new mesh is ``x + w (psi_h(xi_hat) - x)`` with the weight ``w`` of :meth:`relaxation`. If that combination
        inverts an element the mapped mesh itself is used.

        :param physical: the current physical coordinates.
        :param metric: the metric at the current physical vertices.
        :param dt: the time step.
        :param time: time stamp of the new mesh, reported on failure.
        :raises MeshTanglingError: if the new physical mesh has an inverted element.
        """
        computational = self.flow(physical, metric, dt)
        if computational is None:
            self.frozen_steps += 1
            _LOGGER.warning('no valid computational mesh after %d halvings, mesh frozen', self.params.max_halvings)
            return np.array(physical, copy=True)

        target = self.remap(physical, computational)
        result = self.mesh.constrain_to_boundary(physical + self.relaxation(dt) * (target - physical))
        if not self.computational.is_valid(result):
            _LOGGER.debug('relaxed mesh is inverted, using the mapped mesh')
            result = target
        try:
            compute_geometry(result[self.mesh.cells], time=time)
        except MeshTanglingError:
            _LOGGER.error('mesh movement produced inverted elements at time %s', time)
            raise
        return result


def step_mesh(mover: MeshMover, physical: np.ndarray, state: DGState, dt: float) -> np.ndarray:
    """Return the physical mesh of the next time level for the solution at the current one.

    :param mover: the mesh mover.
    :param physical: the current physical coordinates.
    :param state: the solution on the current mesh.
    :param dt: the time step.
    """
    metric = mover.metric(state, physical)
    return mover.step(physical, metric, dt, time=state.time + dt)
