"""Metric tensors from recovered Hessians of the numerical solution."""

from __future__ import annotations

import dataclasses
import functools
import logging
import typing as t

import numpy as np
from scipy import sparse

from ..exceptions import ConfigurationError
from ..mesh import compute_geometry

if t.TYPE_CHECKING:
    from ..mesh import Mesh
    from ..physics import ConservationLaw
    from ..solver import DGState

__all__ = (
    'HessianPatches',
    'MetricField',
    'adaptation_scalar_euler',
    'compute_metric',
    'metric_from_hessian',
    'nodal_average',
    'recover_hessian',
    'smooth_metric',
)

_LOGGER = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True, eq=False)
class MetricField:
    """Symmetric positive definite tensor per vertex, identical on periodic mates."""

    tensors: np.ndarray
    """Shape ``(n_vertices, d, d)``."""

    @property
    def determinants(self) -> np.ndarray:
        """Return ``det(M)`` per vertex."""
        return np.linalg.det(self.tensors)

    def element_average(self, cells: np.ndarray) -> np.ndarray:
        """Return ``M_K`` as the arithmetic mean of the vertex tensors of every element, shape ``(n, d, d)``."""
        return self.tensors[cells].mean(axis=1)

    def scaled(self, factor: float) -> MetricField:
        """Return the metric multiplied by a constant."""
        return MetricField(self.tensors * factor)


def _class_matrix(mesh: Mesh) -> sparse.csr_matrix:
    """Return the ``(n_vertices, n_vertices)`` matrix summing over periodic equivalence classes onto canonical rows."""
    n = mesh.n_vertices
    return sparse.csr_matrix((np.ones(n), (mesh.vertex_mates, np.arange(n))), shape=(n, n))


def nodal_average(mesh: Mesh, coordinates: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Return the volume weighted average of element values over the element patch of every vertex.

    Periodic mates share the union of their patches.

    :param mesh: the mesh.
    :param coordinates: vertex coordinates.
    :param values: one value, or one row of values, per element.
    """
    values = np.asarray(values, dtype=float)
    volumes = compute_geometry(coordinates[mesh.cells]).volumes
    rows = mesh.vertex_mates[mesh.cells].ravel()
    elements = np.repeat(np.arange(mesh.n_elements), mesh.dimension + 1)
    incidence = sparse.csr_matrix(
        (volumes[elements], (rows, elements)), shape=(mesh.n_vertices, mesh.n_elements)
    )
    weight = np.asarray(incidence.sum(axis=1)).ravel()
    weighted = incidence @ values.reshape(mesh.n_elements, -1)
    canonical = mesh.vertex_mates
    result = weighted[canonical] / weight[canonical, None]
    return result.reshape((mesh.n_vertices, *values.shape[1:]))


def adaptation_scalar_euler(density: np.ndarray, energy: np.ndarray, beta: float) -> np.ndarray:
    """Return ``S = 0.5 sqrt(1 + beta (rho / max rho)^2) + 0.5 sqrt(1 + beta (E / max E)^2)``.

    :raises ConfigurationError: if the maximum density or energy is not positive.
    """
    top_density = float(np.max(density))
    top_energy = float(np.max(energy))
    if top_density <= 0 or top_energy <= 0:
        raise ConfigurationError('adaptation scalar requires a positive maximum density and energy')
    return 0.5 * np.sqrt(1 + beta * (density / top_density) ** 2) + 0.5 * np.sqrt(1 + beta * (energy / top_energy) ** 2)


@dataclasses.dataclass(frozen=True, eq=False)
class HessianPatches:
    """Least squares fitting stencils: every vertex is fitted from pairs ``(anchor, target)``.

    The offset of a sample is ``x[target] - x[anchor]`` where ``anchor`` is the vertex or one of its periodic mates, so
    offsets never wrap around a periodic domain.
    """

    indptr: np.ndarray
    anchors: np.ndarray
    targets: np.ndarray

    def sizes(self) -> np.ndarray:
        """Return the number of samples of every vertex."""
        return np.diff(self.indptr)


@functools.lru_cache(maxsize=8)
def _hessian_patches(mesh: Mesh) -> HessianPatches:
    """Return the fitting stencils of a mesh, expanding to the second ring where the first has too few samples."""
    required = 6 if mesh.dimension == 2 else 3
    adjacency = mesh.vertex_adjacency
    classes: dict[int, list[int]] = {}
    for vertex, canonical in enumerate(mesh.vertex_mates):
        classes.setdefault(int(canonical), []).append(vertex)

    def ring(anchor: int, sources: t.Iterable[int]) -> dict[int, tuple[int, int]]:
        found = {}
        for source in sources:
            for target in adjacency.indices[adjacency.indptr[source] : adjacency.indptr[source + 1]]:
                found.setdefault(int(mesh.vertex_mates[target]), (anchor, int(target)))
        return found

    indptr = [0]
    anchors: list[int] = []
    targets: list[int] = []
    for vertex in range(mesh.n_vertices):
        samples: dict[int, tuple[int, int]] = {int(mesh.vertex_mates[vertex]): (vertex, vertex)}
        members = classes[int(mesh.vertex_mates[vertex])]
        for mate in members:
            for key, pair in ring(mate, [mate]).items():
                samples.setdefault(key, pair)
        if len(samples) < required:
            first = dict(samples)
            for anchor, target in first.values():
                for key, pair in ring(anchor, [target]).items():
                    samples.setdefault(key, pair)
        for anchor, target in samples.values():
            anchors.append(anchor)
            targets.append(target)
        indptr.append(len(anchors))

    return HessianPatches(np.array(indptr), np.array(anchors, dtype=np.int64), np.array(targets, dtype=np.int64))


def _design_matrix(offsets: np.ndarray) -> np.ndarray:
    """Return the rows ``[1, r, r r^T / 2]`` of the quadratic fit for offsets of shape ``(..., d)``."""
    ones = np.ones(offsets.shape[:-1])
    if offsets.shape[-1] == 1:
        x = offsets[..., 0]
        return np.stack((ones, x, 0.5 * x**2), axis=-1)
    x, y = offsets[..., 0], offsets[..., 1]
    return np.stack((ones, x, y, 0.5 * x**2, x * y, 0.5 * y**2), axis=-1)


def recover_hessian(mesh: Mesh, coordinates: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Return the Hessian per vertex from a least squares quadratic fit to the vertex values of its patch.

    Offsets are scaled by the patch size before fitting. Rank deficient patches yield a zero Hessian.

    :param mesh: the mesh.
    :param coordinates: vertex coordinates.
    :param values: one scalar per vertex.
    :return: symmetric Hessians of shape ``(n_vertices, d, d)``.
    """
    dimension = mesh.dimension
    patches = _hessian_patches(mesh)
    sizes = patches.sizes()
    offsets = coordinates[patches.targets] - coordinates[patches.anchors]
    samples = values[patches.targets]
    hessians = np.zeros((mesh.n_vertices, dimension, dimension))
    deficient = 0

    for size in np.unique(sizes):
        vertices = np.nonzero(sizes == size)[0]
        rows = patches.indptr[vertices][:, None] + np.arange(size)
        local = offsets[rows]
        scale = np.maximum(np.abs(local).max(axis=(1, 2)), np.finfo(float).tiny)
        design = _design_matrix(local / scale[:, None, None])
        ranks = np.linalg.matrix_rank(design)
        full = ranks == design.shape[-1]
        deficient += int((~full).sum())
        if not full.any():
            continue
        fitted = np.einsum('pij,pj->pi', np.linalg.pinv(design[full]), samples[rows[full]])
        second = fitted[:, dimension + 1 :] / scale[full, None] ** 2
        if dimension == 1:
            hessians[vertices[full], 0, 0] = second[:, 0]
        else:
            hessians[vertices[full], 0, 0] = second[:, 0]
            hessians[vertices[full], 0, 1] = second[:, 1]
            hessians[vertices[full], 1, 0] = second[:, 1]
            hessians[vertices[full], 1, 1] = second[:, 2]

    if deficient:
        _LOGGER.warning('%d rank deficient Hessian recovery patches, using a zero Hessian', deficient)

    return hessians


def metric_from_hessian(hessians: np.ndarray) -> MetricField:
    """Return ``M = det(I + |H|)^(-1 / (d + 4)) (I + |H|)`` per vertex."""
    dimension = hessians.shape[-1]
    symmetric = 0.5 * (hessians + np.swapaxes(hessians, -1, -2))
    eigenvalues, vectors = np.linalg.eigh(symmetric)
    shifted = 1.0 + np.abs(eigenvalues)
    base = np.einsum('nij,nj,nkj->nik', vectors, shifted, vectors)
    factor = np.prod(shifted, axis=-1) ** (-1.0 / (dimension + 4))
    return MetricField(factor[:, None, None] * base)


@functools.lru_cache(maxsize=8)
def _canonical_adjacency(mesh: Mesh) -> sparse.csr_matrix:
    """Return the adjacency of periodic equivalence classes expressed on canonical vertices, without self loops."""
    gather = _class_matrix(mesh)
    adjacency = (gather @ mesh.vertex_adjacency @ gather.T).tocsr()
    adjacency.setdiag(0)
    adjacency.eliminate_zeros()
    adjacency.data[:] = 1.0
    return adjacency


def smooth_metric(mesh: Mesh, field: MetricField, sweeps: int) -> MetricField:
    """Apply sweeps of the low-pass filter ``M_j <- (2 M_j + sum_adj M_i) / (2 + |adj(j)|)``.

    :raises ValueError: for a negative number of sweeps.
    """
    if sweeps < 0:
        raise ValueError(f'number of sweeps should be nonnegative, got {sweeps}')
    if sweeps == 0:
        return field

    dimension = mesh.dimension
    adjacency = _canonical_adjacency(mesh)
    degree = np.asarray(adjacency.sum(axis=1)).ravel()
    canonical = mesh.vertex_mates
    values = field.tensors.reshape(mesh.n_vertices, dimension * dimension)

    for _ in range(sweeps):
        combined = 2.0 * values + adjacency @ values
        values = (combined / (2.0 + degree)[:, None])[canonical]

    return MetricField(values.reshape(mesh.n_vertices, dimension, dimension))


def compute_metric(
    mesh: Mesh, coordinates: np.ndarray, state: DGState, law: ConservationLaw, beta: float, sweeps: int
) -> MetricField:
    """Return the smoothed metric of a solution.

    Scalar laws use the solution itself; the Euler equations use the adaptation scalar of nodal density and energy.
    """
    averages = state.averages()
    if law.n_components == 1:
        nodal = nodal_average(mesh, coordinates, averages[:, 0])
    else:
        nodal_values = nodal_average(mesh, coordinates, averages)
        nodal = adaptation_scalar_euler(nodal_values[:, 0], nodal_values[:, -1], beta)
    field = metric_from_hessian(recover_hessian(mesh, coordinates, nodal))
    return smooth_metric(mesh, field, sweeps)
