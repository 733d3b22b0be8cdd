"""Point location in a simplicial mesh by neighbor walks with an exhaustive fallback."""

from __future__ import annotations

import logging
import typing as t

import numpy as np

if t.TYPE_CHECKING:
    from .mesh import Mesh

__all__ = ('barycentric', 'locate_point', 'locate_points')

_LOGGER = logging.getLogger(__name__)

TOLERANCE = 1e-12
MAX_WALK = 64


def barycentric(vertices: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Return the barycentric coordinates of points in simplices.

    :param vertices: simplex vertices, shape ``(p, d + 1, d)``.
    :param points: one point per simplex, shape ``(p, d)``.
    :return: barycentric coordinates of shape ``(p, d + 1)``.
    """
    jacobians = np.swapaxes(vertices[:, 1:, :] - vertices[:, :1, :], 1, 2)
    local = np.linalg.solve(jacobians, (points - vertices[:, 0, :])[..., None])[..., 0]
    return np.concatenate((1.0 - local.sum(axis=1, keepdims=True), local), axis=1)


def locate_points(
    mesh: Mesh, coordinates: np.ndarray, points: np.ndarray, guesses: np.ndarray | None = None
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Locate many points at once.

    All points walk simultaneously from their guess element towards the face with the most negative barycentric
    coordinate. Points that leave through a boundary or a periodic face, or do not arrive within a bounded number of
    moves, are located by an exhaustive scan. Points outside the domain are assigned to the closest element with their
    barycentric coordinates clipped to the element.

    :param mesh: the mesh providing the connectivity.
    :param coordinates: vertex coordinates of the mesh.
    :param points: points to locate, shape ``(p, d)``.
    :param guesses: element to start the walk from for each point.
    :return: element ids, barycentric coordinates and a boolean mask of points found outside the domain.
    """
    points = np.asarray(points, dtype=float).reshape(len(points), mesh.dimension)
    elements = np.zeros(len(points), dtype=np.int64) if guesses is None else np.array(guesses, dtype=np.int64)
    weights = np.zeros((len(points), mesh.dimension + 1))
    walkable = (mesh.neighbors >= 0) & np.all(mesh.face_shifts == 0.0, axis=2)

    outside = np.zeros(len(points), dtype=bool)
    pending = np.arange(len(points))
    for _ in range(MAX_WALK):
        if not len(pending):
            break
        local = barycentric(coordinates[mesh.cells[elements[pending]]], points[pending])
        worst = np.argmin(local, axis=1)
        found = local[np.arange(len(pending)), worst] >= -TOLERANCE
        weights[pending[found]] = local[found]

        moving = pending[~found]
        exits = worst[~found]
        can_walk = walkable[elements[moving], exits]
        elements[moving[can_walk]] = mesh.neighbors[elements[moving[can_walk]], exits[can_walk]]
        pending = moving[can_walk]

        stuck = moving[~can_walk]
        if len(stuck):
            outside[_scan(mesh, coordinates, points, stuck, elements, weights)] = True

    if len(pending):
        outside[_scan(mesh, coordinates, points, pending, elements, weights)] = True

    if outside.any():
        _LOGGER.warning('%d points located outside of the domain, projected onto the nearest element', outside.sum())

    return elements, weights, outside


def _scan(
    mesh: Mesh,
    coordinates: np.ndarray,
    points: np.ndarray,
    indices: np.ndarray,
    elements: np.ndarray,
    weights: np.ndarray,
) -> np.ndarray:
    """Locate points by testing every element, returning the indices of points that lie outside the domain.

    Results are written into ``elements`` and ``weights``. Outside points are assigned the element whose smallest
    barycentric coordinate is largest, with the coordinates clipped and renormalized.
    """
    vertices = coordinates[mesh.cells]
    jacobians = np.swapaxes(vertices[:, 1:, :] - vertices[:, :1, :], 1, 2)
    inverses = np.linalg.inv(jacobians)
    outside = []

    for index in indices:
        local = np.einsum('nij,nj->ni', inverses, points[index] - vertices[:, 0, :])
        full = np.concatenate((1.0 - local.sum(axis=1, keepdims=True), local), axis=1)
        best = int(np.argmax(full.min(axis=1)))
        elements[index] = best
        if full[best].min() >= -TOLERANCE:
            weights[index] = full[best]
            continue
        clipped = np.clip(full[best], 0.0, None)
        weights[index] = clipped / clipped.sum()
        outside.append(index)

    return np.array(outside, dtype=np.int64)


def locate_point(
    mesh: Mesh, coordinates: np.ndarray, point: t.Sequence[float] | np.ndarray, guess: int = 0
) -> tuple[int, np.ndarray, bool]:
    """Return the element containing a point, its barycentric coordinates and whether it was outside the domain.

    :param mesh: the mesh providing the connectivity.
    :param coordinates: vertex coordinates of the mesh.
    :param point: the point to locate.
    :param guess: element to start the neighbor walk from.
    """
    elements, weights, outside = locate_points(mesh, coordinates, np.atleast_2d(point), np.array([guess]))
    return int(elements[0]), weights[0], bool(outside[0])
