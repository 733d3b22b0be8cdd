"""The coupled moving mesh discontinuous Galerkin time loop."""

from __future__ import annotations

import dataclasses
import logging
import math
import typing as t

import numpy as np

from ..exceptions import NumericalError
from ..limiter import Limiter
from ..mesh import MeshMotion, min_inradius
from ..mmpde import MeshEnergyParams, MeshMover
from ..solver import Discretization, StepControls, compute_dt, project_initial, rk3_step, stable_dt
from .norms import ErrorAccumulator, pointwise_error
from .output import OutputWriter

if t.TYPE_CHECKING:
    from ..mesh import Mesh
    from ..problems import ExactSolution
    from ..solver import DGState
    from .config import RunConfig
    from .norms import ErrorReport

__all__ = ('RunResult', 'Simulation', 'component_names', 'run')

_LOGGER = logging.getLogger(__name__)

END_MESH_PASSES = 4
"""Number of time step reductions for the mesh at the end of the step, ``x^n + dt x'``."""


def component_names(law_name: str, dimension: int) -> tuple[str, ...]:
    """Return the names of the conserved components of a law."""
    if law_name == 'burgers':
        return ('u',)
    return ('rho', 'rho_u', 'rho_v', 'E') if dimension == 2 else ('rho', 'rho_u', 'E')


@dataclasses.dataclass(frozen=True, eq=False)
class RunResult:
    """Outcome of a run."""

    config: RunConfig
    """The resolved configuration."""

    mesh: Mesh
    discretization: Discretization
    state: DGState
    coordinates: np.ndarray
    """Vertex coordinates at the final time."""

    steps: int
    errors: ErrorReport | None
    """Error norms against the exact solution, if there is one."""

    frozen_steps: int = 0
    """Number of steps in which the mesh movement failed and the mesh was kept."""

    def deviation(self, reference: ExactSolution, component: int = 0) -> float:
        """Return the final time L1 deviation from a reference solution."""
        errors, weights = pointwise_error(self.mesh, self.state, self.coordinates, reference, component)
        return float(np.sum(weights * np.abs(errors)))

    def smallest_element(self) -> float:
        """Return the barycenter coordinate along ``x`` of the element with the smallest inradius."""
        from ..mesh import compute_geometry

        geometry = compute_geometry(self.coordinates[self.mesh.cells])
        return float(geometry.barycenters[np.argmin(geometry.inradii), 0])


class Simulation:
    """State of a running simulation, advanced one time step at a time.

    Every step computes the metric from the current solution once, moves the mesh over a trial step, fixes the time
    step from the meshes at both ends and advances the solution with the Runge-Kutta method on the linearly moving
    mesh. The coefficients are carried over unchanged from one mesh to the next.
    """

    def __init__(self, config: RunConfig, exact: ExactSolution | None = None):
        """Set up the mesh, the discretization and the initial state.

        :param config: the run configuration, resolved against the defaults of its problem.
        :param exact: the solution to measure errors against, the exact solution of the problem if not specified.
        """
        self.config = config = config.resolved()
        spec = config.spec
        assert config.cfl is not None and config.tau is not None and config.beta is not None
        assert config.t_final is not None

        self.mesh = spec.build_mesh(config.resolution)
        self.law = spec.build_law()
        self.discretization = Discretization(self.mesh, self.law, config.degree, spec.build_boundaries(self.law))
        self.controls = StepControls(
            cfl=config.cfl, t_final=config.t_final, limiter=bool(config.limiter), moving=config.moving
        )
        self.limiter = Limiter(self.discretization) if config.limiter else None
        self.mover = MeshMover(
            self.mesh,
            self.law,
            MeshEnergyParams(tau=config.tau, beta=config.beta, sweeps=config.sweeps, integrator=config.integrator),
        )
        self.coordinates = np.array(self.mesh.points, copy=True)
        self.state = project_initial(
            spec.initial_condition(), self.mesh, self.discretization.basis, self.law.n_components
        )
        self.step_count = 0

        exact = spec.exact_solution() if exact is None else exact
        self.accumulator = ErrorAccumulator(self.mesh, exact) if exact is not None else None
        self.writer = (
            OutputWriter(config.output, self.mesh, component_names(spec.law, self.mesh.dimension), config.cadence)
            if config.output is not None
            else None
        )

    @property
    def finished(self) -> bool:
        """Return whether the final time has been reached."""
        return self.state.time >= self.controls.t_final

    def _remaining(self) -> float:
        return self.controls.t_final - self.state.time

    def _motion(self, dt: float) -> MeshMotion:
        """Return the mesh motion of the next step.

        The time step also satisfies the restriction on the mesh at the end of the step, ``x^n + dt x'``.
        """
        time = self.state.time
        coordinates = self.coordinates
        disc = self.discretization

        if not self.controls.moving:
            return MeshMotion.static(coordinates, time, time + dt)

        metric = self.mover.metric(self.state, coordinates)
        trial = self.mover.step(coordinates, metric, dt, time=time + dt)
        velocities = (trial - coordinates) / dt
        dt = compute_dt(disc, self.state, coordinates, trial, velocities, self.controls)
        end = self.mesh.constrain_to_boundary(coordinates + dt * velocities)

        for _ in range(END_MESH_PASSES):
            bound = stable_dt(disc, self.state.coefficients, end, self.controls.cfl, velocities)
            if bound >= dt * (1.0 - 1e-12):
                break
            _LOGGER.debug('time step %.4e reduced to %.4e for the end mesh', dt, bound)
            dt = bound
            end = self.mesh.constrain_to_boundary(coordinates + dt * velocities)

        if _LOGGER.isEnabledFor(logging.DEBUG):
            report = self.mover.computational.equidistribution(end, metric)
            _LOGGER.debug(
                'equidistribution: sigma=%.6e |Omega_c|=%.6e variation=%.4e',
                report.sigma,
                report.computational_volume,
                report.variation,
            )
        return MeshMotion(start=coordinates, end=end, t_start=time, t_end=time + dt)

    def advance(self) -> DGState:
        """Advance the solution by one time step and return the new state."""
        disc = self.discretization
        trial = min(
            stable_dt(disc, self.state.coefficients, self.coordinates, self.controls.cfl),
            self.controls.step_cap,
            self._remaining(),
        )
        if not math.isfinite(trial) or trial >= self._remaining() * (1.0 - 1e-12):
            trial = self._remaining()
        motion = self._motion(trial)

        def rhs(coefficients: np.ndarray, time: float) -> np.ndarray:
            return disc.rhs(coefficients, motion, time)

        def volumes(time: float) -> tuple[np.ndarray, np.ndarray]:
            return disc.volume_rates(motion, time)

        limit = self.limiter.hook(motion) if self.limiter is not None else None
        state = rk3_step(self.state, motion.dt, rhs, limit, volumes=None if motion.is_static else volumes)
        if motion.t_end >= self.controls.t_final * (1.0 - 1e-14):
            state = state.replace(state.coefficients, time=self.controls.t_final)
        self.law.check_admissible(state.averages(), state.time)

        self.state = state
        self.coordinates = motion.end
        self.step_count += 1

        if self.accumulator is not None:
            self.accumulator.add(state, self.coordinates, motion.dt)

        flags = self.limiter.last_flags if self.limiter is not None else None
        if self.writer is not None:
            self.writer.record(self.step_count, state.time, self.coordinates, flags)
        due = self.writer is not None and self.writer.is_due(self.step_count, final=self.finished)
        if due and self.writer is not None:
            self.writer.snapshot(self.step_count, state, self.coordinates)
        if _LOGGER.isEnabledFor(logging.INFO if due else logging.DEBUG):
            _LOGGER.log(
                logging.INFO if due else logging.DEBUG,
                'step %d: t=%.6e dt=%.4e troubled=%d min size=%.4e',
                self.step_count,
                state.time,
                motion.dt,
                flags.count if flags is not None else 0,
                min_inradius(self.mesh, self.coordinates),
            )
        return state

    def result(self) -> RunResult:
        """Return the result of the run so far."""
        return RunResult(
            config=self.config,
            mesh=self.mesh,
            discretization=self.discretization,
            state=self.state,
            coordinates=self.coordinates,
            steps=self.step_count,
            errors=self.accumulator.report() if self.accumulator is not None and self.step_count else None,
            frozen_steps=self.mover.frozen_steps,
        )


def run(config: RunConfig, exact: ExactSolution | None = None) -> RunResult:
    """Run a simulation to its final time.

    :param config: the run configuration.
    :param exact: the solution to measure errors against, the exact solution of the problem if not specified.
    :raises NumericalError: if the method fails; the state is dumped to the output directory first.
    """
    simulation = Simulation(config, exact)
    config = simulation.config
    _LOGGER.info(
        'running `%s`: k=%d, N=%d, moving=%s, limiter=%s, T=%.6e',
        config.problem,
        config.degree,
        config.resolution,
        config.moving,
        config.limiter,
        config.t_final,
    )

    if simulation.writer is not None:
        simulation.writer.record(0, 0.0, simulation.coordinates, None)
        simulation.writer.snapshot(0, simulation.state, simulation.coordinates)

    try:
        while not simulation.finished:
            simulation.advance()
    except NumericalError:
        _LOGGER.error('run failed at step %d, t=%.6e', simulation.step_count + 1, simulation.state.time)
        if simulation.writer is not None:
            filepath = simulation.writer.dump(simulation.state, simulation.coordinates)
            _LOGGER.error('last state written to `%s`', filepath)
        raise

    result = simulation.result()
    _LOGGER.info('finished `%s` after %d steps at t=%.6e', config.problem, result.steps, result.state.time)
    return result
