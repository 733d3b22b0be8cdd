"""Exact solution of the Riemann problem of the one dimensional Euler equations for an ideal gas."""

from __future__ import annotations

import dataclasses

import numpy as np
from scipy import optimize

from ..exceptions import ConvergenceError, VacuumError

__all__ = ('ExactRiemannSolver', 'riemann_exact_euler')


@dataclasses.dataclass(frozen=True)
class ExactRiemannSolver:
    """Exact Riemann solver iterating on the pressure of the star region.

    States are primitive triples ``(rho, u, P)``.
    """

    gamma: float = 1.4

    def __post_init__(self) -> None:
        if not self.gamma > 1.0:
            raise ValueError(f'adiabatic index should exceed one, got {self.gamma}')

    def sound_speed(self, density: float, pressure: float) -> float:
        """Return the sound speed of a state."""
        return float(np.sqrt(self.gamma * pressure / density))

    def _wave_function(self, density: float, pressure: float, star: float) -> tuple[float, float]:
        """Return the pressure function of one side and its derivative, shock branch above its pressure."""
        gamma = self.gamma
        sound = self.sound_speed(density, pressure)
        if star > pressure:
            a = 2.0 / ((gamma + 1.0) * density)
            b = (gamma - 1.0) / (gamma + 1.0) * pressure
            root = np.sqrt(a / (star + b))
            return float((star - pressure) * root), float((1.0 - 0.5 * (star - pressure) / (b + star)) * root)
        ratio = star / pressure
        value = 2.0 * sound / (gamma - 1.0) * (ratio ** ((gamma - 1.0) / (2.0 * gamma)) - 1.0)
        return float(value), float(ratio ** (-(gamma + 1.0) / (2.0 * gamma)) / (density * sound))

    def star_state(self, left: tuple[float, float, float], right: tuple[float, float, float]) -> tuple[float, float]:
        """Return the pressure and velocity of the star region.

        :raises ValueError: for non-positive densities or pressures.
        :raises VacuumError: if the data generate vacuum.
        :raises ConvergenceError: if the pressure iteration fails.
        """
        (rho_l, u_l, p_l), (rho_r, u_r, p_r) = left, right
        if min(rho_l, p_l, rho_r, p_r) <= 0:
            raise ValueError(f'Riemann states should have positive density and pressure, got {left} and {right}')

        a_l = self.sound_speed(rho_l, p_l)
        a_r = self.sound_speed(rho_r, p_r)
        if 2.0 / (self.gamma - 1.0) * (a_l + a_r) <= u_r - u_l:
            raise VacuumError(f'Riemann data generate vacuum: left {left}, right {right}')

        def pressure_function(star: float) -> float:
            return self._wave_function(rho_l, p_l, star)[0] + self._wave_function(rho_r, p_r, star)[0] + u_r - u_l

        low = 1e-14 * min(p_l, p_r)
        high = max(p_l, p_r)
        while pressure_function(high) < 0:
            high *= 2.0

        try:
            star, result = optimize.brentq(pressure_function, low, high, xtol=1e-15 * high, full_output=True)
        except (RuntimeError, ValueError) as exception:
            raise ConvergenceError(f'star pressure iteration failed for {left} and {right}') from exception
        if not result.converged:
            raise ConvergenceError(f'star pressure iteration did not converge for {left} and {right}')

        velocity = 0.5 * (u_l + u_r) + 0.5 * (
            self._wave_function(rho_r, p_r, star)[0] - self._wave_function(rho_l, p_l, star)[0]
        )
        return float(star), float(velocity)

    def sample(
        self, left: tuple[float, float, float], right: tuple[float, float, float], speeds: np.ndarray | float
    ) -> np.ndarray:
        """Return the primitive solution at the similarity coordinates ``x / t``, shape ``(..., 3)``."""
        gamma = self.gamma
        speeds = np.asarray(speeds, dtype=float)
        star, velocity = self.star_state(left, right)
        g6 = (gamma - 1.0) / (gamma + 1.0)
        result = np.empty((*speeds.shape, 3))

        for side, state, sign in (('left', left, -1.0), ('right', right, 1.0)):
            density, u, pressure = state
            sound = self.sound_speed(density, pressure)
            mask = speeds <= velocity if side == 'left' else speeds > velocity
            s = speeds[mask]
            ratio = star / pressure
            values = np.empty((len(s), 3))

            if star > pressure:
                strength = (gamma + 1.0) / (2.0 * gamma) * ratio + (gamma - 1.0) / (2.0 * gamma)
                shock = u + sign * sound * np.sqrt(strength)
                outside = sign * (s - shock) >= 0
                star_density = density * (ratio + g6) / (g6 * ratio + 1.0)
                values[:] = (star_density, velocity, star)
                values[outside] = state
            else:
                head = u + sign * sound
                tail = velocity + sign * sound * ratio ** ((gamma - 1.0) / (2.0 * gamma))
                outside = sign * (s - head) >= 0
                inside_star = sign * (s - tail) <= 0
                fan_velocity = 2.0 / (gamma + 1.0) * (-sign * sound + 0.5 * (gamma - 1.0) * u + s)
                fan_sound = 2.0 / (gamma + 1.0) * (sound - sign * 0.5 * (gamma - 1.0) * (u - s))
                with np.errstate(invalid='ignore'):
                    values[:, 0] = density * (fan_sound / sound) ** (2.0 / (gamma - 1.0))
                    values[:, 2] = pressure * (fan_sound / sound) ** (2.0 * gamma / (gamma - 1.0))
                values[:, 1] = fan_velocity
                values[inside_star] = (density * ratio ** (1.0 / gamma), velocity, star)
                values[outside] = state

            result[mask] = values

        return result


def riemann_exact_euler(
    left: tuple[float, float, float],
    right: tuple[float, float, float],
    speeds: np.ndarray | float,
    gamma: float = 1.4,
) -> np.ndarray:
    """Return the primitive exact Riemann solution at similarity coordinates ``x / t``.

    :param left: primitive state ``(rho, u, P)`` left of the jump.
    :param right: primitive state right of the jump.
    :param speeds: the similarity coordinates.
    :param gamma: adiabatic index.
    :raises VacuumError: if the data generate vacuum.
    """
    return ExactRiemannSolver(gamma).sample(left, right, speeds)
