"""Quasi-Lagrangian semi-discrete DG operator on a moving mesh.

For every element ``K`` and test function ``phi_l`` the operator evaluates

    du_l/dt = |K_ref| / |K| * ( int_K F . grad phi_l - u (phi_l div X' + X' . grad phi_l) - int_dK H^ phi_l )

where ``X'`` is the piecewise linear mesh velocity and ``H^`` the local Lax-Friedrichs flux of
``H(u) = (F(u) - u X') . n``. The solution coefficients are never transferred between meshes; the mesh motion only
enters through ``X'``.
"""

from __future__ import annotations

import typing as t

import numpy as np

from ..approx import build_basis, edge_quadrature, element_quadrature, face_points
from ..exceptions import ConfigurationError
from ..mesh import ElementGeometry, geometry_at
from .flux import llf_flux

if t.TYPE_CHECKING:
    from ..mesh import Mesh, MeshMotion
    from ..physics import ConservationLaw
    from .boundary import BoundaryCondition

__all__ = ('Discretization', 'semidiscrete_rhs')


def _linear_weights(points: np.ndarray) -> np.ndarray:
    """Return the linear nodal basis (barycentric coordinates) at reference points of shape ``(..., d)``."""
    return np.concatenate((1.0 - points.sum(axis=-1, keepdims=True), points), axis=-1)


class Discretization:
    """Reference tables and connectivity needed to evaluate the DG operator of one law on one mesh."""

    def __init__(
        self,
        mesh: Mesh,
        law: ConservationLaw,
        k: int,
        boundaries: t.Mapping[str, BoundaryCondition] | None = None,
    ):
        """Construct the discretization.

        :param mesh: the mesh, whose connectivity is fixed.
        :param law: the conservation law.
        :param k: polynomial degree, 1 or 2.
        :param boundaries: boundary condition for every boundary segment that has no periodic partner.
        :raises ConfigurationError: if a boundary segment has no boundary condition.
        """
        if law.dimension != mesh.dimension:
            raise ConfigurationError(f'law of dimension {law.dimension} on a mesh of dimension {mesh.dimension}')

        dimension = mesh.dimension
        self.mesh = mesh
        self.law = law
        self.basis = build_basis(dimension, k)
        self.element_rule = element_quadrature(dimension, k)

        points = self.element_rule.points
        self.element_values = self.basis.values(points)
        self.element_gradients = self.basis.gradients(points)
        self.element_linear = _linear_weights(points)

        if dimension == 1:
            self.face_weights = np.ones(1)
            faces = face_points(1)
        else:
            rule = edge_quadrature(k)
            self.face_weights = rule.weights
            faces = face_points(2, rule)

        n_face_points = faces.shape[1]
        self.face_reference = faces
        self.face_values = self.basis.values(faces.reshape(-1, dimension)).reshape(dimension + 1, n_face_points, -1)
        self.face_linear = _linear_weights(faces)
        self.midpoint_linear = self.face_linear.mean(axis=1)
        self.reverse = np.arange(n_face_points)[::-1]

        self.interior_faces = np.nonzero(mesh.neighbors >= 0)
        self.boundary_faces: list[tuple[tuple[np.ndarray, np.ndarray], BoundaryCondition]] = []
        boundaries = boundaries or {}
        open_faces = mesh.neighbors < 0
        for index, name in enumerate(mesh.boundary_names):
            selection = np.nonzero(open_faces & (mesh.face_tags == index))
            if not len(selection[0]):
                continue
            if name not in boundaries:
                raise ConfigurationError(f'no boundary condition for boundary segment `{name}`')
            self.boundary_faces.append((selection, boundaries[name]))

    @property
    def n_unknowns(self) -> int:
        """Return the number of coefficients per component."""
        return self.mesh.n_elements * self.basis.size

    def traces(self, coefficients: np.ndarray) -> np.ndarray:
        """Return the interior traces at every face quadrature point, shape ``(n, d + 1, g, m)``."""
        return np.einsum('fgl,nlm->nfgm', self.face_values, coefficients)

    def face_coordinates(self, geometry: ElementGeometry) -> np.ndarray:
        """Return the physical face quadrature points, shape ``(n, d + 1, g, d)``."""
        return np.einsum('fga,nad->nfgd', self.face_linear, geometry.vertices)

    def face_speeds(self, geometry: ElementGeometry, velocities: np.ndarray) -> np.ndarray:
        """Return the normal mesh speed ``X' . n`` at every face quadrature point, shape ``(n, d + 1, g)``."""
        face_velocities = np.einsum('fga,nad->nfgd', self.face_linear, velocities)
        return np.einsum('nfgd,nfd->nfg', face_velocities, geometry.normals)

    def exterior_traces(self, traces: np.ndarray, geometry: ElementGeometry, time: float) -> np.ndarray:
        """Return the exterior traces: the neighbor trace across interior faces, boundary data elsewhere."""
        mesh = self.mesh
        exterior = np.empty_like(traces)
        elements, faces = self.interior_faces
        neighbors = mesh.neighbors[elements, faces]
        neighbor_faces = mesh.neighbor_faces[elements, faces]
        exterior[elements, faces] = traces[neighbors, neighbor_faces][:, self.reverse, :]

        if self.boundary_faces:
            coordinates = self.face_coordinates(geometry)
            for (elements, faces), condition in self.boundary_faces:
                shape = traces[elements, faces].shape
                points = coordinates[elements, faces].reshape(-1, mesh.dimension)
                normals = np.repeat(geometry.normals[elements, faces], shape[1], axis=0)
                interior = traces[elements, faces].reshape(-1, shape[-1])
                values = condition.exterior(self.law, interior, points, normals, time)
                exterior[elements, faces] = values.reshape(shape)

        return exterior

    def viscosity(
        self, averages: np.ndarray, geometry: ElementGeometry, velocities: np.ndarray, time: float
    ) -> np.ndarray:
        """Return the Lax-Friedrichs constant per face from the two adjacent cell averages, shape ``(n, d + 1)``.

        The mesh speed is evaluated at the face midpoint; on boundary faces the exterior average is the boundary state
        of the interior average.
        """
        mesh = self.mesh
        law = self.law
        normals = geometry.normals
        midpoint_velocities = np.einsum('fa,nad->nfd', self.midpoint_linear, velocities)
        speeds = np.einsum('nfd,nfd->nf', midpoint_velocities, normals)

        interior = np.broadcast_to(averages[:, None, :], (*normals.shape[:2], averages.shape[1]))
        exterior = np.array(interior)
        elements, faces = self.interior_faces
        exterior[elements, faces] = averages[mesh.neighbors[elements, faces]]

        for (elements, faces), condition in self.boundary_faces:
            midpoints = np.einsum('pa,pad->pd', self.midpoint_linear[faces], geometry.vertices[elements])
            exterior[elements, faces] = condition.exterior(
                law, averages[elements], midpoints, normals[elements, faces], time
            )

        return np.maximum(
            law.max_signal_speed(interior, normals, speeds),
            law.max_signal_speed(exterior, normals, speeds),
        )

    def rhs(self, coefficients: np.ndarray, motion: MeshMotion, time: float) -> np.ndarray:
        """Return the time derivative of the coefficients at a time within the step of the mesh motion.

        :raises mmdg.exceptions.MeshTanglingError: if the mesh is inverted at ``time``.
        :raises mmdg.exceptions.AdmissibilityError: if the solution is inadmissible at a quadrature point.
        """
        geometry, velocities = geometry_at(self.mesh, motion, time)
        return self.rhs_on(coefficients, geometry, velocities, time)

    def volume_rates(self, motion: MeshMotion, time: float) -> tuple[np.ndarray, np.ndarray]:
        """Return the element volumes and their time derivatives ``|K| div X'`` at a time within the step.

        Both are scaled by the reference volume, matching the scale of the mass matrix.
        """
        geometry, velocities = geometry_at(self.mesh, motion, time)
        scale = geometry.volumes / self.basis.reference_volume
        return scale, scale * np.einsum('nad,nad->n', geometry.gradients, velocities)

    def rhs_on(
        self, coefficients: np.ndarray, geometry: ElementGeometry, velocities: np.ndarray, time: float
    ) -> np.ndarray:
        """Return the time derivative of the coefficients for a given geometry and per-element vertex velocities."""
        law = self.law
        values = np.einsum('ql,nlm->nqm', self.element_values, coefficients)
        traces = self.traces(coefficients)
        law.check_admissible(values, time)
        law.check_admissible(traces, time)

        gradients = np.einsum('nkd,qlk->nqld', geometry.inverses, self.element_gradients)
        mesh_velocity = np.einsum('qa,nad->nqd', self.element_linear, velocities)
        divergence = np.einsum('nad,nad->n', geometry.gradients, velocities)

        transport = self.element_values[None, :, :] * divergence[:, None, None]
        transport = transport + np.einsum('nqd,nqld->nql', mesh_velocity, gradients)
        integrand = np.einsum('nqdm,nqld->nqlm', law.flux(values), gradients)
        integrand = integrand - values[:, :, None, :] * transport[..., None]
        volume = np.einsum('q,nqlm->nlm', self.element_rule.weights, integrand)

        exterior = self.exterior_traces(traces, geometry, time)
        normals = np.broadcast_to(geometry.normals[:, :, None, :], (*traces.shape[:3], geometry.dimension))
        averages = self.basis.constant * coefficients[:, 0, :]
        viscosity = self.viscosity(averages, geometry, velocities, time)
        numerical_flux = llf_flux(
            law, traces, exterior, normals, self.face_speeds(geometry, velocities), viscosity[:, :, None]
        )
        surface = np.einsum(
            'nfgm,fgl,g,nf->nlm', numerical_flux, self.face_values, self.face_weights, geometry.face_areas
        )

        scale = geometry.volumes / self.basis.reference_volume
        return volume - surface / scale[:, None, None]


def semidiscrete_rhs(
    discretization: Discretization, coefficients: np.ndarray, motion: MeshMotion, time: float
) -> np.ndarray:
    """Return the semi-discrete time derivative ``L_h(u_h, t)`` of the coefficients."""
    return discretization.rhs(coefficients, motion, time)
