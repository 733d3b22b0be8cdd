"""Gauss quadrature rules on the reference interval ``[0, 1]`` and the reference triangle ``(0,0), (1,0), (0,1)``."""

from __future__ import annotations

import dataclasses
import functools
import math
import typing as t

import numpy as np
from scipy import special

__all__ = (
    'QuadratureRule',
    'edge_quadrature',
    'element_quadrature',
    'face_points',
    'gauss_legendre',
    'simplex_quadrature',
)


@dataclasses.dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Quadrature rule on a reference simplex."""

    points: np.ndarray
    """Reference points, shape ``(q, d)``."""

    weights: np.ndarray
    """Positive weights summing to the reference measure, shape ``(q,)``."""

    degree: int
    """Polynomials up to this total degree are integrated exactly."""

    def __len__(self) -> int:
        return len(self.weights)

    def integrate(self, function: t.Callable[[np.ndarray], np.ndarray]) -> t.Any:
        """Integrate a function over the reference simplex.

        :param function: callable mapping points of shape ``(q, d)`` to values with leading axis ``q``.
        """
        return np.tensordot(self.weights, function(self.points), axes=(0, 0))


@functools.lru_cache(maxsize=None)
def gauss_legendre(n: int) -> QuadratureRule:
    """Return the ``n``-point Gauss-Legendre rule on ``[0, 1]``, exact to degree ``2n - 1``."""
    if n < 1:
        raise ValueError(f'number of points should be at least 1, got {n}')
    nodes, weights = special.roots_legendre(n)
    return QuadratureRule(points=((nodes + 1) / 2)[:, None], weights=weights / 2, degree=2 * n - 1)


@functools.lru_cache(maxsize=None)
def _conical_product(degree: int) -> QuadratureRule:
    """Return a collapsed Gauss-Jacobi times Gauss-Legendre rule on the reference triangle."""
    n = max(1, math.ceil((degree + 1) / 2))
    legendre_nodes, legendre_weights = special.roots_legendre(n)
    jacobi_nodes, jacobi_weights = special.roots_jacobi(n, 1, 0)

    u = (jacobi_nodes + 1) / 2
    v = (legendre_nodes + 1) / 2
    x = np.repeat(u, n)
    y = np.outer(1 - u, v).ravel()
    weights = np.outer(jacobi_weights, legendre_weights).ravel() / 8
    return QuadratureRule(points=np.column_stack((x, y)), weights=weights, degree=2 * n - 1)


@functools.lru_cache(maxsize=None)
def _symmetric_seven_point() -> QuadratureRule:
    """Return the symmetric seven point rule on the reference triangle, exact to degree five."""
    root = math.sqrt(15.0)
    orbits = [((6 - root) / 21, (155 - root) / 1200), ((6 + root) / 21, (155 + root) / 1200)]

    barycentric = [(1 / 3, 1 / 3, 1 / 3)]
    weights = [9 / 40]
    for a, weight in orbits:
        b = 1 - 2 * a
        barycentric.extend(((a, a, b), (a, b, a), (b, a, a)))
        weights.extend((weight,) * 3)

    points = np.array(barycentric)[:, 1:]
    return QuadratureRule(points=points, weights=np.array(weights) / 2, degree=5)


def simplex_quadrature(dimension: int, degree: int) -> QuadratureRule:
    """Return a rule on the reference simplex exact for polynomials of the given total degree.

    :raises ValueError: if the dimension is not 1 or 2.
    """
    if dimension == 1:
        return gauss_legendre(max(1, math.ceil((degree + 1) / 2)))
    if dimension == 2:
        return _conical_product(degree)
    raise ValueError(f'unsupported dimension {dimension}')


def element_quadrature(dimension: int, k: int) -> QuadratureRule:
    """Return the element rule used by the discontinuous Galerkin operator for degree ``k``.

    Intervals use ``k + 1`` Gauss-Legendre points, triangles the seven point rule of degree five.
    """
    _check_degree(k)
    if dimension == 1:
        return gauss_legendre(k + 1)
    if dimension == 2:
        return _symmetric_seven_point()
    raise ValueError(f'unsupported dimension {dimension}')


def edge_quadrature(k: int) -> QuadratureRule:
    """Return the ``k + 1`` point Gauss-Legendre rule used on the edges of triangles."""
    _check_degree(k)
    return gauss_legendre(k + 1)


def face_points(dimension: int, rule: QuadratureRule | None = None) -> np.ndarray:
    """Return the reference coordinates of the face quadrature points of every local face.

    Face ``i`` is opposite to vertex ``i``. In 2D the points of face ``i`` run from local vertex ``i + 1`` to local
    vertex ``i + 2``, so the neighbor sharing the face visits the same physical points in reverse order.

    :return: array of shape ``(d + 1, g, d)``; in 1D ``g = 1``.
    """
    if dimension == 1:
        return np.array([[[1.0]], [[0.0]]])
    if rule is None:
        raise ValueError('an edge rule is required for triangles')

    corners = np.eye(3)
    s = rule.points[:, 0]
    result = np.empty((3, len(s), 2))
    for face in range(3):
        start, end = corners[(face + 1) % 3], corners[(face + 2) % 3]
        weights = np.outer(1 - s, start) + np.outer(s, end)
        result[face] = weights[:, 1:]
    return result


def _check_degree(k: int) -> None:
    if k not in (1, 2):
        raise ValueError(f'unsupported polynomial degree {k}, expected 1 or 2')
