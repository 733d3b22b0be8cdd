"""Euler equations of gas dynamics for an ideal gas with constant ratio of specific heats."""

from __future__ import annotations

import numpy as np

from ..exceptions import AdmissibilityError
from .law import ConservationLaw

__all__ = ('ADMISSIBILITY_TOLERANCE', 'Euler')

ADMISSIBILITY_TOLERANCE = 1e-13


class Euler(ConservationLaw):
    """Euler equations in conserved variables ``(rho, rho u, [rho v,] E)``.

    The pressure follows from ``E = P / (gamma - 1) + rho |v|^2 / 2``.
    """

    name = 'euler'

    def __init__(self, dimension: int, gamma: float = 1.4):
        """Construct the law.

        :param dimension: 1 or 2.
        :param gamma: ratio of specific heats, larger than one.
        """
        super().__init__(dimension)
        if not gamma > 1.0:
            raise ValueError(f'ratio of specific heats should exceed one, got {gamma}')
        self.gamma = gamma

    def __repr__(self) -> str:
        return f'Euler(dimension={self.dimension}, gamma={self.gamma})'

    @property
    def n_components(self) -> int:
        return self.dimension + 2

    @property
    def has_characteristics(self) -> bool:
        return True

    def pressure(self, u: np.ndarray) -> np.ndarray:
        """Return the pressure of conserved states."""
        momentum = u[..., 1:-1]
        kinetic = 0.5 * np.sum(momentum**2, axis=-1) / u[..., 0]
        return (self.gamma - 1.0) * (u[..., -1] - kinetic)

    def sound_speed(self, u: np.ndarray) -> np.ndarray:
        """Return the speed of sound ``sqrt(gamma P / rho)``."""
        return np.sqrt(self.gamma * self.pressure(u) / u[..., 0])

    def to_primitive(self, u: np.ndarray) -> np.ndarray:
        """Return primitive variables ``(rho, u, [v,] P)``."""
        result = np.array(u, dtype=float, copy=True)
        result[..., 1:-1] = u[..., 1:-1] / u[..., :1]
        result[..., -1] = self.pressure(u)
        return result

    def from_primitive(self, w: np.ndarray | list[float]) -> np.ndarray:
        """Return conserved variables from primitive variables ``(rho, u, [v,] P)``."""
        w = np.asarray(w, dtype=float)
        result = np.array(w, copy=True)
        velocity = w[..., 1:-1]
        result[..., 1:-1] = w[..., :1] * velocity
        result[..., -1] = w[..., -1] / (self.gamma - 1.0) + 0.5 * w[..., 0] * np.sum(velocity**2, axis=-1)
        return result

    def flux(self, u: np.ndarray) -> np.ndarray:
        rho = u[..., 0]
        velocity = u[..., 1:-1] / rho[..., None]
        pressure = self.pressure(u)
        result = u[..., None, :] * velocity[..., :, None]
        for axis in range(self.dimension):
            result[..., axis, 1 + axis] += pressure
            result[..., axis, -1] += pressure * velocity[..., axis]
        return result

    def max_signal_speed(self, u: np.ndarray, normal: np.ndarray, mesh_speed: np.ndarray | float = 0.0) -> np.ndarray:
        velocity = u[..., 1:-1] / u[..., :1]
        normal_velocity = np.sum(velocity * normal, axis=-1)
        return np.abs(normal_velocity - mesh_speed) + self.sound_speed(u)

    def check_admissible(self, u: np.ndarray, time: float | None = None) -> None:
        density = u[..., 0]
        pressure = self.pressure(u)
        bad = ~((density > ADMISSIBILITY_TOLERANCE) & (pressure > ADMISSIBILITY_TOLERANCE))
        if np.any(bad):
            elements = np.unique(np.nonzero(bad.reshape(len(u), -1))[0]) if np.ndim(bad) else ()
            raise AdmissibilityError('non-positive density or pressure', elements, time)

    def eigensystem(self, u: np.ndarray, normal: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Return the characteristic decomposition along ``normal``.

        The eigenvalues are ordered ``(v.n - c, v.n, [v.n,] v.n + c)``; in 2D the second field is the shear wave and
        the third the entropy wave.

        :raises mmdg.exceptions.AdmissibilityError: for inadmissible states.
        """
        self.check_admissible(np.asarray(u)[None, :])
        rho, energy = u[0], u[-1]
        velocity = u[1:-1] / rho
        pressure = float(self.pressure(u))
        c = float(np.sqrt(self.gamma * pressure / rho))
        b1 = (self.gamma - 1.0) / c**2
        b2 = 0.5 * b1 * float(velocity @ velocity)
        enthalpy = (energy + pressure) / rho
        vn = float(velocity @ normal)

        if self.dimension == 1:
            n = float(normal[0])
            mu = float(velocity[0])
            left = np.array(
                [
                    [(b2 + mu * n / c) / 2, -(b1 * mu + n / c) / 2, b1 / 2],
                    [1 - b2, b1 * mu, -b1],
                    [(b2 - mu * n / c) / 2, -(b1 * mu - n / c) / 2, b1 / 2],
                ]
            )
            right = np.array(
                [
                    [1.0, 1.0, 1.0],
                    [mu - c * n, mu, mu + c * n],
                    [enthalpy - c * vn, 0.5 * mu**2, enthalpy + c * vn],
                ]
            )
            return left, right, np.array([vn - c, vn, vn + c])

        nx, ny = float(normal[0]), float(normal[1])
        mu, nu = float(velocity[0]), float(velocity[1])
        left = np.array(
            [
                [(b2 + vn / c) / 2, -(b1 * mu + nx / c) / 2, -(b1 * nu + ny / c) / 2, b1 / 2],
                [ny * mu - nx * nu, -ny, nx, 0.0],
                [1 - b2, b1 * mu, b1 * nu, -b1],
                [(b2 - vn / c) / 2, -(b1 * mu - nx / c) / 2, -(b1 * nu - ny / c) / 2, b1 / 2],
            ]
        )
        right = np.array(
            [
                [1.0, 0.0, 1.0, 1.0],
                [mu - c * nx, -ny, mu, mu + c * nx],
                [nu - c * ny, nx, nu, nu + c * ny],
                [enthalpy - c * vn, -ny * mu + nx * nu, 0.5 * (mu**2 + nu**2), enthalpy + c * vn],
            ]
        )
        return left, right, np.array([vn - c, vn, vn, vn + c])
