"""Boundary conditions as providers of exterior traces on boundary faces.

Periodic boundaries are not represented here: the mesh glues periodic faces so they have regular neighbors.
"""

from __future__ import annotations

import abc
import typing as t

import numpy as np

if t.TYPE_CHECKING:
    from ..physics import ConservationLaw

__all__ = (
    'BoundaryCondition',
    'DirichletBoundary',
    'OutflowBoundary',
    'ReflectiveBoundary',
    'SplitBoundary',
)

StateFunction = t.Callable[[np.ndarray, float], np.ndarray]
"""Callable mapping points of shape ``(p, d)`` and a time to states of shape ``(p, m)``."""


class BoundaryCondition(abc.ABC):
    """Provider of the exterior trace ``u(x_ext)`` on boundary faces."""

    @abc.abstractmethod
    def exterior(
        self, law: ConservationLaw, interior: np.ndarray, points: np.ndarray, normals: np.ndarray, time: float
    ) -> np.ndarray:
        """Return the exterior states.

        :param law: the conservation law.
        :param interior: interior traces of shape ``(p, m)``.
        :param points: physical locations of shape ``(p, d)``.
        :param normals: outward unit normals of shape ``(p, d)``.
        :param time: the current time.
        """


class OutflowBoundary(BoundaryCondition):
    """Zero-gradient boundary copying the interior trace."""

    def exterior(
        self, law: ConservationLaw, interior: np.ndarray, points: np.ndarray, normals: np.ndarray, time: float
    ) -> np.ndarray:
        return interior.copy()


class DirichletBoundary(BoundaryCondition):
    """Boundary prescribing the exterior state as a function of position and time."""

    def __init__(self, function: StateFunction):
        """Construct the boundary.

        :param function: callable returning the exterior states for points and a time.
        """
        self._function = function

    def exterior(
        self, law: ConservationLaw, interior: np.ndarray, points: np.ndarray, normals: np.ndarray, time: float
    ) -> np.ndarray:
        values = np.asarray(self._function(points, time), dtype=float)
        return np.broadcast_to(values.reshape(len(points), -1), interior.shape).copy()


class ReflectiveBoundary(BoundaryCondition):
    """Solid wall mirroring the normal momentum; scalar laws fall back to copying the interior."""

    def exterior(
        self, law: ConservationLaw, interior: np.ndarray, points: np.ndarray, normals: np.ndarray, time: float
    ) -> np.ndarray:
        result = interior.copy()
        if law.n_components == 1:
            return result
        momentum = interior[:, 1:-1]
        normal_momentum = np.sum(momentum * normals, axis=1, keepdims=True)
        result[:, 1:-1] = momentum - 2.0 * normal_momentum * normals
        return result


class SplitBoundary(BoundaryCondition):
    """Boundary switching between two conditions depending on position and time."""

    def __init__(
        self, selector: t.Callable[[np.ndarray, float], np.ndarray], first: BoundaryCondition, second: BoundaryCondition
    ):
        """Construct the boundary.

        :param selector: callable returning ``True`` for the points where ``first`` applies.
        :param first: condition used where the selector holds.
        :param second: condition used elsewhere.
        """
        self._selector = selector
        self._first = first
        self._second = second

    def exterior(
        self, law: ConservationLaw, interior: np.ndarray, points: np.ndarray, normals: np.ndarray, time: float
    ) -> np.ndarray:
        mask = np.asarray(self._selector(points, time), dtype=bool)
        result = self._second.exterior(law, interior, points, normals, time)
        if mask.any():
            first = self._first.exterior(law, interior[mask], points[mask], normals[mask], time)
            result[mask] = first
        return result
