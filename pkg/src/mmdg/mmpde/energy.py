"""Meshing functional of the computational mesh and its analytic gradient.

For an element ``K`` with physical edge matrix ``E_K`` and computational edge matrix ``Ec_K`` the Jacobian of the
map from the physical onto the computational element is ``J = Ec_K E_K^-1``. The energy density is

    G = sqrt(det M) tr(J M^-1 J^T)^(3d/4) + d^(3d/4) sqrt(det M) (det J / sqrt(det M))^(3/2)

and the functional is ``I_h = sum_K |K| G(J_K, det J_K, M_K)``.
"""

from __future__ import annotations

import math

import numpy as np

from ..exceptions import MeshTanglingError

__all__ = ('edge_matrices', 'energy_density', 'local_velocities', 'mesh_energy')


def edge_matrices(vertices: np.ndarray) -> np.ndarray:
    """Return the matrices whose columns are the edges ``x_i - x_0``, shape ``(n, d, d)``."""
    return np.swapaxes(vertices[:, 1:, :] - vertices[:, :1, :], 1, 2)


def _jacobians(physical: np.ndarray, computational: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``E_K``, ``Ec_K`` and ``J`` for element vertices of shape ``(n, d + 1, d)``.

    :raises MeshTanglingError: if a physical element is degenerate or inverted.
    """
    edges = edge_matrices(physical)
    computational_edges = edge_matrices(computational)
    determinants = np.linalg.det(edges)
    inverted = np.nonzero(~(determinants > 0.0))[0]
    if len(inverted):
        raise MeshTanglingError('physical elements with non-positive volume', inverted)
    return edges, computational_edges, computational_edges @ np.linalg.inv(edges)


def energy_density(jacobians: np.ndarray, metrics: np.ndarray) -> np.ndarray:
    """Return ``G`` per element for Jacobians and element metrics of shape ``(n, d, d)``.

    :raises MeshTanglingError: if a computational element is inverted.
    """
    dimension = jacobians.shape[-1]
    root = np.sqrt(np.linalg.det(metrics))
    determinant = np.linalg.det(jacobians)
    inverted = np.nonzero(~(determinant > 0.0))[0]
    if len(inverted):
        raise MeshTanglingError('computational elements with non-positive volume', inverted)
    trace = np.einsum('nij,njk,nik->n', jacobians, np.linalg.inv(metrics), jacobians)
    exponent = 3 * dimension / 4
    return root * trace**exponent + dimension**exponent * root * (determinant / root) ** 1.5


def mesh_energy(physical: np.ndarray, computational: np.ndarray, metrics: np.ndarray) -> float:
    """Return the meshing functional ``I_h``.

    :param physical: physical vertex coordinates per element, shape ``(n, d + 1, d)``.
    :param computational: computational vertex coordinates per element, same shape.
    :param metrics: element metric ``M_K``, shape ``(n, d, d)``.
    :raises MeshTanglingError: if a physical or computational element is degenerate.
    """
    edges, _, jacobians = _jacobians(physical, computational)
    volumes = np.linalg.det(edges) / math.factorial(edges.shape[-1])
    return float(np.sum(volumes * energy_density(jacobians, metrics)))


def local_velocities(physical: np.ndarray, computational: np.ndarray, metrics: np.ndarray) -> np.ndarray:
    """Return the velocity contributed by every element to each of its computational vertices.

    The rows ``v_1 .. v_d`` are ``-E_K^-1 dG/dJ - dG/d(det J) (det Ec_K / det E_K) Ec_K^-1`` and
    ``v_0 = -(v_1 + ... + v_d)``, so that ``|K| v_i`` is minus the derivative of ``|K| G`` with respect to the
    computational vertex ``i``.

    :param physical: physical vertex coordinates per element, shape ``(n, d + 1, d)``.
    :param computational: computational vertex coordinates per element, same shape.
    :param metrics: element metric ``M_K``, shape ``(n, d, d)``.
    :return: velocities of shape ``(n, d + 1, d)``.
    :raises MeshTanglingError: if a physical element is degenerate.
    """
    edges, computational_edges, jacobians = _jacobians(physical, computational)
    dimension = edges.shape[-1]
    determinant_metric = np.linalg.det(metrics)
    inverse_metric = np.linalg.inv(metrics)
    determinant = np.linalg.det(jacobians)
    trace = np.einsum('nij,njk,nik->n', jacobians, inverse_metric, jacobians)

    exponent = 3 * dimension / 4
    by_jacobian = (
        (1.5 * dimension * np.sqrt(determinant_metric) * trace ** (exponent - 1))[:, None, None]
        * inverse_metric
        @ np.swapaxes(jacobians, 1, 2)
    )
    by_determinant = 1.5 * dimension**exponent * determinant_metric**-0.25 * np.sqrt(np.maximum(determinant, 0.0))

    rows = -np.linalg.inv(edges) @ by_jacobian
    rows -= (by_determinant * determinant)[:, None, None] * np.linalg.inv(computational_edges)
    return np.concatenate((-rows.sum(axis=1, keepdims=True), rows), axis=1)
