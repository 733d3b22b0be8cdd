"""Discontinuous Galerkin coefficient tables and the initial L2 projection."""

from __future__ import annotations

import dataclasses
import typing as t

import numpy as np

from ..approx import Basis, simplex_quadrature
from ..mesh import compute_geometry

if t.TYPE_CHECKING:
    from ..mesh import Mesh

__all__ = ('DGState', 'InitialCondition', 'evaluate_function', 'project_initial')

InitialCondition = t.Callable[[np.ndarray], np.ndarray]
"""Callable mapping points of shape ``(..., d)`` to states of shape ``(..., m)`` or scalars of shape ``(...)``."""


@dataclasses.dataclass(frozen=True, eq=False)
class DGState:
    """Piecewise polynomial solution ``u_h = sum_j u_j^K phi_j`` at a time."""

    coefficients: np.ndarray
    """Coefficient table of shape ``(n_elements, L, m)``."""

    basis: Basis
    time: float = 0.0

    @property
    def n_components(self) -> int:
        """Return the number of conserved components."""
        return int(self.coefficients.shape[2])

    def averages(self) -> np.ndarray:
        """Return the cell averages, shape ``(n_elements, m)``."""
        return self.basis.constant * self.coefficients[:, 0, :]

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Return the solution at reference points of shape ``(q, d)`` on every element, shape ``(n, q, m)``."""
        return np.einsum('ql,nlm->nqm', self.basis.values(points), self.coefficients)

    def replace(self, coefficients: np.ndarray, time: float | None = None) -> DGState:
        """Return a new state with other coefficients and optionally another time stamp."""
        return DGState(coefficients=coefficients, basis=self.basis, time=self.time if time is None else time)


def evaluate_function(function: InitialCondition, points: np.ndarray, n_components: int) -> np.ndarray:
    """Evaluate a state valued function and return values with a trailing component axis."""
    values = np.asarray(function(points), dtype=float)
    if values.shape == points.shape[:-1]:
        values = values[..., None]
    if values.shape[-1] != n_components:
        raise ValueError(f'function returned {values.shape[-1]} components, expected {n_components}')
    return values


def project_initial(
    function: InitialCondition,
    mesh: Mesh,
    basis: Basis,
    n_components: int,
    *,
    coordinates: np.ndarray | None = None,
    time: float = 0.0,
) -> DGState:
    """Return the element-wise L2 projection of a function onto the discontinuous polynomial space.

    With the orthonormal reference basis the projection reduces to ``u_j = int_ref u(F_K(xi)) phi_j(xi) dxi``.

    :param function: the function to project.
    :param mesh: the mesh.
    :param basis: the reference basis.
    :param n_components: number of conserved components.
    :param coordinates: vertex coordinates, defaults to the initial mesh.
    :param time: time stamp of the returned state.
    """
    coordinates = mesh.points if coordinates is None else coordinates
    geometry = compute_geometry(coordinates[mesh.cells])
    rule = simplex_quadrature(mesh.dimension, 2 * basis.degree + 4)
    values = evaluate_function(function, geometry.to_physical(rule.points), n_components)
    coefficients = np.einsum('q,ql,nqm->nlm', rule.weights, basis.values(rule.points), values)
    return DGState(coefficients=coefficients, basis=basis, time=time)
