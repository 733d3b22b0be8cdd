"""Element geometry of affine simplices and the piecewise linear motion of a mesh over one time step."""

from __future__ import annotations

import dataclasses
import math
import typing as t

import numpy as np

from ..exceptions import MeshTanglingError

if t.TYPE_CHECKING:
    from .mesh import Mesh

__all__ = ('ElementGeometry', 'MeshMotion', 'compute_geometry', 'geometry_at', 'interpolate_motion', 'min_inradius')


@dataclasses.dataclass(frozen=True, eq=False)
class ElementGeometry:
    """Geometric quantities of every element of a mesh for one set of vertex coordinates.

    The affine map of element ``K`` is ``x = x_0 + B (xi)`` with ``B`` the matrix whose columns are the edges
    ``x_i - x_0``, mapping the reference simplex onto ``K``.
    """

    vertices: np.ndarray
    """Vertex coordinates per element, shape ``(n, d + 1, d)``."""

    jacobians: np.ndarray
    """Jacobian ``B`` of the affine reference map, shape ``(n, d, d)``."""

    inverses: np.ndarray
    """Inverse of the Jacobian, shape ``(n, d, d)``."""

    volumes: np.ndarray
    """Element volumes ``|K|``, shape ``(n,)``."""

    barycenters: np.ndarray
    """Element barycenters, shape ``(n, d)``."""

    gradients: np.ndarray
    """Gradients of the barycentric coordinates, shape ``(n, d + 1, d)``."""

    normals: np.ndarray
    """Outward unit normal of each local face, shape ``(n, d + 1, d)``."""

    face_areas: np.ndarray
    """Measure ``|e|`` of each local face (unity in 1D), shape ``(n, d + 1)``."""

    inradii: np.ndarray
    """Radius of the inscribed ball, half the length in 1D, shape ``(n,)``."""

    @property
    def dimension(self) -> int:
        """Return the spatial dimension."""
        return int(self.vertices.shape[2])

    def to_physical(self, points: np.ndarray) -> np.ndarray:
        """Map reference points of shape ``(q, d)`` to physical points of shape ``(n, q, d)``."""
        return self.vertices[:, None, 0, :] + np.einsum('nij,qj->nqi', self.jacobians, points)

    def to_reference(self, points: np.ndarray) -> np.ndarray:
        """Map physical points of shape ``(n, q, d)`` back to reference points of the same shape."""
        return np.einsum('nij,nqj->nqi', self.inverses, points - self.vertices[:, None, 0, :])


def compute_geometry(vertices: np.ndarray, *, time: float | None = None) -> ElementGeometry:
    """Compute the geometry of a set of simplices.

    :param vertices: vertex coordinates per element, shape ``(n, d + 1, d)``.
    :param time: time stamp reported in case of failure.
    :raises MeshTanglingError: if any element has a non-positive volume.
    """
    dimension = vertices.shape[2]
    jacobians = np.swapaxes(vertices[:, 1:, :] - vertices[:, :1, :], 1, 2)
    determinants = np.linalg.det(jacobians)
    volumes = determinants / math.factorial(dimension)

    inverted = np.nonzero(~(volumes > 0.0))[0]
    if len(inverted):
        raise MeshTanglingError('elements with non-positive volume', inverted, time)

    inverses = np.linalg.inv(jacobians)
    gradients = np.concatenate((-inverses.sum(axis=1, keepdims=True), inverses), axis=1)
    lengths = np.linalg.norm(gradients, axis=2)
    normals = -gradients / lengths[..., None]
    face_areas = dimension * volumes[:, None] * lengths
    inradii = dimension * volumes / face_areas.sum(axis=1)

    return ElementGeometry(
        vertices=vertices,
        jacobians=jacobians,
        inverses=inverses,
        volumes=volumes,
        barycenters=vertices.mean(axis=1),
        gradients=gradients,
        normals=normals,
        face_areas=face_areas,
        inradii=inradii,
    )


@dataclasses.dataclass(frozen=True, eq=False)
class MeshMotion:
    """Linear in time motion of the mesh vertices from ``t_start`` to ``t_end``."""

    start: np.ndarray
    """Vertex coordinates at ``t_start``."""

    end: np.ndarray
    """Vertex coordinates at ``t_end``."""

    t_start: float
    t_end: float

    def __post_init__(self) -> None:
        if not self.t_end > self.t_start:
            raise ValueError(f'invalid step interval [{self.t_start}, {self.t_end}]')
        if self.start.shape != self.end.shape:
            raise ValueError(f'coordinate shapes differ: {self.start.shape} and {self.end.shape}')

    @classmethod
    def static(cls, coordinates: np.ndarray, t_start: float, t_end: float) -> MeshMotion:
        """Return a motion that keeps the vertices at rest."""
        return cls(start=coordinates, end=coordinates, t_start=t_start, t_end=t_end)

    @property
    def dt(self) -> float:
        """Return the length of the step."""
        return self.t_end - self.t_start

    @property
    def velocities(self) -> np.ndarray:
        """Return the constant vertex velocities over the step."""
        return (self.end - self.start) / self.dt

    @property
    def is_static(self) -> bool:
        """Return whether no vertex moves."""
        return bool(np.array_equal(self.start, self.end))


def interpolate_motion(motion: MeshMotion, time: float) -> tuple[np.ndarray, np.ndarray]:
    """Return the vertex coordinates and velocities at a time within the step.

    The endpoints are returned exactly at ``t_start`` and ``t_end``.

    :param motion: the mesh motion over the step.
    :param time: a time in ``[t_start, t_end]``.
    :raises ValueError: if the time lies outside the step.
    """
    slack = 1e-12 * max(1.0, abs(motion.t_end))
    if not motion.t_start - slack <= time <= motion.t_end + slack:
        raise ValueError(f'time {time} outside of the step [{motion.t_start}, {motion.t_end}]')

    velocities = motion.velocities
    if time == motion.t_start:
        return motion.start, velocities
    if time == motion.t_end:
        return motion.end, velocities

    theta = (time - motion.t_start) / motion.dt
    return (1.0 - theta) * motion.start + theta * motion.end, velocities


def geometry_at(mesh: Mesh, motion: MeshMotion, time: float) -> tuple[ElementGeometry, np.ndarray]:
    """Return the element geometry and the per-element vertex velocities at a time within the step.

    :return: the geometry and the vertex velocities of shape ``(n, d + 1, d)``.
    :raises MeshTanglingError: if an element is inverted at that time.
    """
    coordinates, velocities = interpolate_motion(motion, time)
    return compute_geometry(coordinates[mesh.cells], time=time), velocities[mesh.cells]


def min_inradius(mesh: Mesh, coordinates: np.ndarray | None = None) -> float:
    """Return the smallest element inradius of the mesh at the given coordinates."""
    coordinates = mesh.points if coordinates is None else coordinates
    return float(compute_geometry(coordinates[mesh.cells]).inradii.min())
