"""Abstract definition of a hyperbolic conservation law ``u_t + div F(u) = 0``."""

from __future__ import annotations

import abc
import typing as t

import numpy as np

__all__ = ('ConservationLaw',)


class ConservationLaw(abc.ABC):
    """Flux, signal speeds and characteristic decomposition of a conservation law.

    States are arrays whose last axis holds the ``n_components`` conserved variables; all methods broadcast over the
    leading axes.
    """

    name: t.ClassVar[str]

    def __init__(self, dimension: int):
        """Construct the law for a spatial dimension.

        :param dimension: 1 or 2.
        :raises ValueError: for other dimensions.
        """
        if dimension not in (1, 2):
            raise ValueError(f'unsupported dimension {dimension}')
        self.dimension = dimension

    def __repr__(self) -> str:
        return f'{self.__class__.__name__}(dimension={self.dimension})'

    @property
    @abc.abstractmethod
    def n_components(self) -> int:
        """Return the number of conserved components ``m``."""

    @property
    def has_characteristics(self) -> bool:
        """Return whether limiting should be performed in characteristic variables."""
        return False

    @abc.abstractmethod
    def flux(self, u: np.ndarray) -> np.ndarray:
        """Return the flux of states of shape ``(..., m)`` with shape ``(..., d, m)``."""

    @abc.abstractmethod
    def max_signal_speed(self, u: np.ndarray, normal: np.ndarray, mesh_speed: np.ndarray | float = 0.0) -> np.ndarray:
        """Return the largest eigenvalue in magnitude of the directional Jacobian of ``F(u) - u s``.

        :param u: states of shape ``(..., m)``.
        :param normal: unit directions of shape ``(..., d)``.
        :param mesh_speed: normal speed ``s`` of the mesh, broadcast against the leading axes.
        """

    def normal_flux(self, u: np.ndarray, normal: np.ndarray) -> np.ndarray:
        """Return ``F(u) . n`` for states of shape ``(..., m)`` and normals of shape ``(..., d)``."""
        return np.einsum('...dm,...d->...m', self.flux(u), normal)

    def check_admissible(self, u: np.ndarray, time: float | None = None) -> None:
        """Raise if any state is not admissible.

        The leading axis of ``u`` is interpreted as the element index when reporting failures.

        :raises mmdg.exceptions.AdmissibilityError: for inadmissible states.
        """

    def eigensystem(self, u: np.ndarray, normal: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Return the left and right eigenvectors and eigenvalues of the directional Jacobian ``F'(u) . n``.

        :param u: a single state of shape ``(m,)``.
        :param normal: a unit direction of shape ``(d,)``.
        :return: ``(L, R, eigenvalues)`` with ``L @ R`` the identity.
        """
        size = self.n_components
        speed = self.max_signal_speed(u, normal)
        return np.eye(size), np.eye(size), np.full(size, speed)

    def jacobian(self, u: np.ndarray, normal: np.ndarray, step: float = 1e-7) -> np.ndarray:
        """Return the directional flux Jacobian of a single state by central finite differences."""
        size = self.n_components
        result = np.empty((size, size))
        for j in range(size):
            shift = np.zeros(size)
            shift[j] = step * max(1.0, abs(u[j]))
            result[:, j] = (self.normal_flux(u + shift, normal) - self.normal_flux(u - shift, normal)) / (2 * shift[j])
        return result
