"""Third order SSP Runge-Kutta stepping and the moving mesh time step restriction."""

from __future__ import annotations

import dataclasses
import logging
import math
import typing as t

import numpy as np

from ..mesh import compute_geometry

if t.TYPE_CHECKING:
    from .operator import Discretization
    from .state import DGState

__all__ = ('StepControls', 'compute_dt', 'default_cfl', 'rk3_step', 'stable_dt')

_LOGGER = logging.getLogger(__name__)

Operator = t.Callable[[np.ndarray, float], np.ndarray]
"""Callable returning a coefficient update for coefficients at a time."""

VolumeRate = t.Callable[[float], tuple[np.ndarray, np.ndarray]]
"""Callable returning the element volumes and their time derivatives at a time."""


def default_cfl(k: int) -> float:
    """Return the default CFL number for polynomial degree ``k``: 0.3 for ``P1`` and 0.15 for ``P2``."""
    return 0.3 if k == 1 else 0.15


@dataclasses.dataclass(frozen=True)
class StepControls:
    """Parameters controlling the time integration."""

    cfl: float
    t_final: float
    limiter: bool = True
    moving: bool = True
    dt_max: float | None = None
    """Upper bound on the time step, defaults to the final time."""

    def __post_init__(self) -> None:
        if not self.cfl > 0:
            raise ValueError(f'CFL number should be positive, got {self.cfl}')
        if not self.t_final > 0:
            raise ValueError(f'final time should be positive, got {self.t_final}')
        if self.dt_max is not None and not self.dt_max > 0:
            raise ValueError(f'maximum time step should be positive, got {self.dt_max}')

    @property
    def step_cap(self) -> float:
        """Return the effective upper bound on the time step."""
        return self.t_final if self.dt_max is None else self.dt_max


def stable_dt(
    discretization: Discretization,
    coefficients: np.ndarray,
    coordinates: np.ndarray,
    cfl: float,
    velocities: np.ndarray | None = None,
) -> float:
    """Return ``CFL * min_j R_j / max |(F' - X') . n|`` over all face quadrature traces of a mesh.

    Without velocities the mesh is taken at rest. Returns infinity when all signal speeds vanish.
    """
    mesh = discretization.mesh
    geometry = compute_geometry(coordinates[mesh.cells])
    traces = discretization.traces(coefficients)
    normals = np.broadcast_to(geometry.normals[:, :, None, :], (*traces.shape[:3], mesh.dimension))

    if velocities is None:
        speeds: np.ndarray | float = 0.0
    else:
        speeds = discretization.face_speeds(geometry, velocities[mesh.cells])

    fastest = float(np.max(discretization.law.max_signal_speed(traces, normals, speeds)))
    if fastest <= 0.0:
        return math.inf
    return cfl * float(geometry.inradii.min()) / fastest


def compute_dt(
    discretization: Discretization,
    state: DGState,
    coordinates: np.ndarray,
    next_coordinates: np.ndarray,
    velocities: np.ndarray,
    controls: StepControls,
) -> float:
    """Return the time step ``min(dt', dt'')``, capped and clipped to land exactly on the final time.

    :param discretization: the discretization.
    :param state: the solution at ``t_n``.
    :param coordinates: the mesh at ``t_n``, giving ``dt'`` for the mesh at rest.
    :param next_coordinates: the mesh at ``t_n+1``, giving ``dt''`` together with the vertex velocities.
    :param velocities: the vertex velocities over the step.
    :param controls: the step controls.
    """
    first = stable_dt(discretization, state.coefficients, coordinates, controls.cfl)
    second = stable_dt(discretization, state.coefficients, next_coordinates, controls.cfl, velocities)
    remaining = controls.t_final - state.time
    dt = min(first, second, controls.step_cap)

    if dt >= remaining * (1.0 - 1e-12):
        dt = remaining

    _LOGGER.debug('t=%.6e: dt\'=%.4e dt\'\'=%.4e dt=%.4e', state.time, first, second, dt)
    return dt


def rk3_step(
    state: DGState,
    dt: float,
    rhs: Operator,
    limit: Operator | None = None,
    *,
    volumes: VolumeRate | None = None,
) -> DGState:
    """Take one step of the third order TVD Runge-Kutta method.

    The stage times are ``t``, ``t + dt`` and ``t + dt / 2``. The optional limiter is applied to every stage result at
    the time that result belongs to.

    Without ``volumes`` the stages combine the coefficients themselves. With ``volumes`` they combine the volume
    weighted coefficients ``|K| u`` and the stage volumes are advanced by the same combination of the volume rates, so
    that the total mass is conserved exactly while constant states stay constant on a moving mesh. Both coincide on a
    static mesh.

    :param state: the solution at ``t``.
    :param dt: the time step.
    :param rhs: callable returning ``L_h(u, t)``.
    :param limit: callable returning limited coefficients at a time.
    :param volumes: callable returning the element volumes and their time derivatives at a time.
    """

    def finish(coefficients: np.ndarray, time: float) -> np.ndarray:
        return coefficients if limit is None else limit(coefficients, time)

    t0 = state.time
    u0 = state.coefficients

    if volumes is None:
        u1 = finish(u0 + dt * rhs(u0, t0), t0 + dt)
        u2 = finish(0.75 * u0 + 0.25 * (u1 + dt * rhs(u1, t0 + dt)), t0 + 0.5 * dt)
        u3 = finish(u0 / 3.0 + 2.0 / 3.0 * (u2 + dt * rhs(u2, t0 + 0.5 * dt)), t0 + dt)
        return state.replace(u3, time=t0 + dt)

    def mass_rate(coefficients: np.ndarray, time: float) -> tuple[np.ndarray, np.ndarray]:
        volume, rate = volumes(time)
        update = volume[:, None, None] * rhs(coefficients, time) + rate[:, None, None] * coefficients
        return update, rate

    v0, _ = volumes(t0)
    m0 = v0[:, None, None] * u0

    update, rate = mass_rate(u0, t0)
    v1 = v0 + dt * rate
    m1 = m0 + dt * update
    u1 = finish(m1 / v1[:, None, None], t0 + dt)

    update, rate = mass_rate(u1, t0 + dt)
    v2 = 0.75 * v0 + 0.25 * (v1 + dt * rate)
    m2 = 0.75 * m0 + 0.25 * (v1[:, None, None] * u1 + dt * update)
    u2 = finish(m2 / v2[:, None, None], t0 + 0.5 * dt)

    update, rate = mass_rate(u2, t0 + 0.5 * dt)
    v3 = v0 / 3.0 + 2.0 / 3.0 * (v2 + dt * rate)
    m3 = m0 / 3.0 + 2.0 / 3.0 * (v2[:, None, None] * u2 + dt * update)
    u3 = finish(m3 / v3[:, None, None], t0 + dt)
    return state.replace(u3, time=t0 + dt)
