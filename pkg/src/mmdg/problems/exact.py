"""Exact solutions of the scalar and smooth system test problems."""

from __future__ import annotations

import numpy as np

from ..exceptions import ConvergenceError

__all__ = (
    'exact_burgers_2d',
    'exact_burgers_riemann',
    'exact_burgers_sine',
    'exact_euler_advection',
    'exact_euler_advection_2d',
)

MAX_ITERATIONS = 100


def _characteristic_foot(offset: np.ndarray, slope: float, wavenumber: float) -> np.ndarray:
    """Return ``z`` in ``[0, pi / wavenumber]`` with ``z + slope sin(wavenumber z) / wavenumber = offset``.

    The root is searched on the branch where the left hand side increases, which contains it for every offset in
    ``[0, pi / wavenumber]`` and every slope. Newton iterates leaving the bracket are replaced by bisection.

    :param offset: nonnegative distances from the expansion point, at most half a period.
    :param slope: the product ``t * amplitude * wavenumber``.
    :param wavenumber: the wavenumber.
    :raises ConvergenceError: if the iteration does not converge.
    """
    half = np.pi / wavenumber
    upper = half if slope <= 1.0 else float(np.arccos(-1.0 / slope)) / wavenumber

    def residual(z: np.ndarray) -> np.ndarray:
        return z + slope * np.sin(wavenumber * z) / wavenumber - offset

    low = np.zeros_like(offset)
    high = np.full_like(offset, upper)
    z = np.clip(offset, low, high)
    tolerance = 4 * np.finfo(float).eps * half

    for _ in range(MAX_ITERATIONS):
        value = residual(z)
        converged = (np.abs(value) <= tolerance) | (high - low <= tolerance)
        if converged.all():
            return z
        low = np.where(value < 0, z, low)
        high = np.where(value > 0, z, high)
        derivative = 1.0 + slope * np.cos(wavenumber * z)
        with np.errstate(divide='ignore', invalid='ignore'):
            newton = z - value / derivative
        inside = (derivative > 0) & (newton > low) & (newton < high)
        z = np.where(converged, z, np.where(inside, newton, 0.5 * (low + high)))

    raise ConvergenceError(f'characteristic equation not solved within {MAX_ITERATIONS} iterations')


def exact_burgers_sine(
    x: np.ndarray | float,
    t: float,
    *,
    shift: float = 0.5,
    amplitude: float = 1.0,
    wavenumber: float = np.pi,
) -> np.ndarray:
    """Return the entropy solution of ``u_t + (u^2 / 2)_x = 0`` with ``u(x, 0) = shift + amplitude sin(wavenumber x)``.

    The solution is ``u = shift + w(x - shift t, t)`` where ``w`` solves the problem without the shift. The odd
    symmetry of ``w`` about its zero crossings pins the shock, once formed, to the crossing where the data decreases,
    so ``w`` follows from the characteristic equation on the half period next to the expansion point.

    :param x: the positions.
    :param t: the time.
    :param shift: the mean value.
    :param amplitude: the amplitude, positive.
    :param wavenumber: the wavenumber, positive.
    :raises ValueError: for a non-positive amplitude or wavenumber or a negative time.
    """
    if amplitude <= 0 or wavenumber <= 0:
        raise ValueError(f'amplitude and wavenumber should be positive, got {amplitude} and {wavenumber}')
    if t < 0:
        raise ValueError(f'time should be nonnegative, got {t}')

    x = np.asarray(x, dtype=float)
    half = np.pi / wavenumber
    y = np.mod(x - shift * t + half, 2 * half) - half
    foot = _characteristic_foot(np.abs(y), t * amplitude * wavenumber, wavenumber)
    return shift + np.sign(y) * amplitude * np.sin(wavenumber * foot)


def exact_burgers_2d(points: np.ndarray, t: float) -> np.ndarray:
    """Return the solution of the 2D Burgers problem with ``u(x, y, 0) = 0.5 + sin(pi (x + y) / 2)``.

    Along ``s = x + y`` the solution satisfies the 1D equation with doubled speed.
    """
    s = points[..., 0] + points[..., 1]
    return exact_burgers_sine(s, 2.0 * t, shift=0.5, amplitude=1.0, wavenumber=np.pi / 2)


def exact_burgers_riemann(
    x: np.ndarray | float, t: float, *, left: float = 1.0, right: float = 0.0, position: float = 0.0
) -> np.ndarray:
    """Return the entropy solution of the Burgers Riemann problem with a jump at ``position``.

    A decreasing jump is a shock with speed ``(left + right) / 2``, an increasing one a centered rarefaction.
    """
    x = np.asarray(x, dtype=float)
    if t == 0:
        return np.where(x <= position, left, right).astype(float)
    ratio = (x - position) / t
    if left > right:
        return np.where(ratio < 0.5 * (left + right), left, right).astype(float)
    return np.clip(ratio, left, right)


def _euler_conserved(density: np.ndarray, velocity: tuple[float, ...], pressure: float, gamma: float) -> np.ndarray:
    """Return conserved variables for a density field and constant velocity and pressure."""
    momentum = [density * component for component in velocity]
    kinetic = 0.5 * density * sum(component**2 for component in velocity)
    energy = pressure / (gamma - 1.0) + kinetic
    return np.stack((density, *momentum, energy), axis=-1)


def exact_euler_advection(points: np.ndarray, t: float, gamma: float = 1.4) -> np.ndarray:
    """Return ``rho = 1 + 0.2 sin(pi (x - t))`` advected with ``u = 1`` at ``P = 1``, as conserved variables."""
    density = 1.0 + 0.2 * np.sin(np.pi * (points[..., 0] - t))
    return _euler_conserved(density, (1.0,), 1.0, gamma)


def exact_euler_advection_2d(
    points: np.ndarray, t: float, velocity: tuple[float, float] = (0.7, 0.3), gamma: float = 1.4
) -> np.ndarray:
    """Return ``rho = 1 + 0.2 sin(pi (x + y - (u + v) t))`` advected with constant velocity at ``P = 1``."""
    phase = points[..., 0] + points[..., 1] - (velocity[0] + velocity[1]) * t
    density = 1.0 + 0.2 * np.sin(np.pi * phase)
    return _euler_conserved(density, velocity, 1.0, gamma)
