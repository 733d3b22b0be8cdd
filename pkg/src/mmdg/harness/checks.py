"""Property suite verifying the discretization, the limiter and the mesh movement before physics runs."""

from __future__ import annotations

import dataclasses
import itertools
import logging
import math
import typing as t

import numpy as np

from ..approx import build_basis, element_quadrature, monomial_integral, simplex_quadrature
from ..limiter import Limiter
from ..mesh import VERTEX_INTERIOR, MeshMotion, compute_geometry, generate_criss_cross, generate_interval
from ..mmpde import MetricField, mesh_energy, mesh_velocities
from ..physics import Burgers, Euler
from ..solver import Discretization, OutflowBoundary, project_initial, rk3_step
from .config import RunConfig
from .run import Simulation

if t.TYPE_CHECKING:
    from ..mesh import Mesh
    from ..physics import ConservationLaw

__all__ = ('CHECKS', 'CheckResult', 'run_checks')

_LOGGER = logging.getLogger(__name__)

SEED = 20240607


@dataclasses.dataclass(frozen=True)
class CheckResult:
    """Outcome of one property check."""

    name: str
    value: float
    """The measured deviation."""

    tolerance: float

    @property
    def passed(self) -> bool:
        """Return whether the deviation is within the tolerance."""
        return bool(self.value < self.tolerance)

    def to_text(self) -> str:
        """Return a one line summary."""
        status = 'ok' if self.passed else 'FAILED'
        return f'{self.name:<24} {self.value:.3e} < {self.tolerance:.0e}  {status}'


def check_quadrature() -> CheckResult:
    """Integrate every monomial up to the declared degree of each rule."""
    rules = [simplex_quadrature(d, degree) for d in (1, 2) for degree in range(10)]
    rules += [element_quadrature(d, k) for d in (1, 2) for k in (1, 2)]
    worst = 0.0
    for rule in rules:
        dimension = rule.points.shape[1]
        for exponents in itertools.product(range(rule.degree + 1), repeat=dimension):
            if sum(exponents) > rule.degree:
                continue
            approximation = float(rule.weights @ np.prod(rule.points**exponents, axis=1))
            exact = monomial_integral(tuple(exponents))
            worst = max(worst, abs(approximation - exact) / exact)
    return CheckResult('quadrature', worst, 1e-13)


def check_eigensystem() -> CheckResult:
    """Compare the characteristic decomposition of the Euler equations with the identity and the flux Jacobian."""
    generator = np.random.default_rng(SEED)
    worst = 0.0
    for dimension in (1, 2):
        law = Euler(dimension)
        for _ in range(10):
            primitive = np.concatenate(
                ([generator.uniform(0.5, 2.0)], generator.uniform(-1.0, 1.0, dimension), [generator.uniform(0.5, 2.0)])
            )
            u = law.from_primitive(primitive)
            angle = generator.uniform(0.0, 2.0 * math.pi)
            normal = np.array([math.cos(angle), math.sin(angle)])[:dimension]
            if dimension == 1:
                normal = np.sign(normal)
            left, right, eigenvalues = law.eigensystem(u, normal)
            identity = float(np.abs(left @ right - np.eye(len(u))).max())
            jacobian = law.jacobian(u, normal)
            difference = float(np.abs(right @ np.diag(eigenvalues) @ left - jacobian).max())
            worst = max(worst, identity / 1e-12, difference / 1e-6)
    return CheckResult('eigensystem', worst, 1.0)


def _random_mesh(generator: np.random.Generator, amplitude: float) -> tuple[Mesh, np.ndarray, np.ndarray]:
    """Return a mesh and two perturbations of its interior vertices."""
    mesh = generate_criss_cross(4, 4)
    interior = (mesh.vertex_kinds == VERTEX_INTERIOR)[:, None]
    physical = mesh.points + interior * generator.uniform(-amplitude, amplitude, mesh.points.shape)
    computational = mesh.points + interior * generator.uniform(-amplitude, amplitude, mesh.points.shape)
    return mesh, physical, computational


def _random_metric(generator: np.random.Generator, n: int, dimension: int) -> MetricField:
    factors = generator.uniform(-0.5, 0.5, (n, dimension, dimension))
    return MetricField(factors @ np.swapaxes(factors, 1, 2) + 0.5 * np.eye(dimension))


def check_mesh_gradient(meshes: int = 20, step: float = 1e-6) -> CheckResult:
    """Compare the mesh velocities with central differences of the meshing functional."""
    generator = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(meshes):
        mesh, physical, computational = _random_mesh(generator, 0.02)
        metric = _random_metric(generator, mesh.n_vertices, mesh.dimension)
        metrics = metric.element_average(mesh.cells)
        velocities = mesh_velocities(mesh, physical, computational, metric, tau=1.0)
        velocities /= metric.determinants[:, None] ** 0.25

        interior = np.nonzero(mesh.vertex_kinds == VERTEX_INTERIOR)[0]
        gradient = np.zeros((len(interior), mesh.dimension))
        for row, vertex in enumerate(interior):
            for axis in range(mesh.dimension):
                shifted = [computational.copy(), computational.copy()]
                shifted[0][vertex, axis] += step
                shifted[1][vertex, axis] -= step
                energies = [mesh_energy(physical[mesh.cells], points[mesh.cells], metrics) for points in shifted]
                gradient[row, axis] = (energies[0] - energies[1]) / (2 * step)

        error = np.abs(velocities[interior] + gradient).max() / np.abs(gradient).max()
        worst = max(worst, float(error))
    return CheckResult('mesh gradient', worst, 1e-6)


def check_metric_scaling() -> CheckResult:
    """Verify that the mesh velocities do not change when the metric is multiplied by a constant."""
    generator = np.random.default_rng(SEED)
    mesh, physical, computational = _random_mesh(generator, 0.02)
    metric = _random_metric(generator, mesh.n_vertices, mesh.dimension)
    base = mesh_velocities(mesh, physical, computational, metric, tau=1.0)
    worst = 0.0
    for factor in (0.1, 16.0):
        scaled = mesh_velocities(mesh, physical, computational, metric.scaled(factor), tau=1.0)
        worst = max(worst, float(np.abs(scaled - base).max() / np.abs(base).max()))
    return CheckResult('metric scaling', worst, 1e-10)


def check_free_stream(steps: int = 100, dt: float = 1e-3) -> CheckResult:
    """Advance a constant state of the Euler equations on a periodic mesh moving with a smooth deformation."""
    mesh = generate_criss_cross(8, 8, periodic=True)
    law = Euler(2)
    discretization = Discretization(mesh, law, 1)
    constant = law.from_primitive(np.array([1.0, 0.5, 0.3, 1.0]))

    def uniform(points: np.ndarray) -> np.ndarray:
        return np.broadcast_to(constant, (*points.shape[:-1], 4))

    state = project_initial(uniform, mesh, discretization.basis, 4)
    initial = state.coefficients.copy()

    bump = (np.sin(math.pi * mesh.points[:, 0]) * np.sin(math.pi * mesh.points[:, 1]))[:, None]
    period = steps * dt

    def position(time: float) -> np.ndarray:
        return mesh.points + 0.03 * math.sin(2 * math.pi * time / period) * bump * np.array([1.0, -0.5])

    for index in range(steps):
        motion = MeshMotion(position(index * dt), position((index + 1) * dt), index * dt, (index + 1) * dt)

        def rhs(coefficients: np.ndarray, time: float, motion: MeshMotion = motion) -> np.ndarray:
            return discretization.rhs(coefficients, motion, time)

        def volumes(time: float, motion: MeshMotion = motion) -> tuple[np.ndarray, np.ndarray]:
            return discretization.volume_rates(motion, time)

        state = rk3_step(state, dt, rhs, volumes=volumes)

    return CheckResult('free stream', float(np.abs(state.coefficients - initial).max()), 1e-11)


def _total(mesh: Mesh, coordinates: np.ndarray, averages: np.ndarray) -> float:
    return float(compute_geometry(coordinates[mesh.cells]).volumes @ averages[:, 0])


def _conservation(name: str, config: RunConfig, steps: int, tolerance: float) -> CheckResult:
    """Return the drift of the total of the first component per unit time over the first steps of a run."""
    simulation = Simulation(config)
    start = _total(simulation.mesh, simulation.coordinates, simulation.state.averages())
    for _ in range(steps):
        if simulation.finished:
            break
        simulation.advance()
    end = _total(simulation.mesh, simulation.coordinates, simulation.state.averages())
    return CheckResult(name, abs(end - start) / max(simulation.state.time, 1e-300), tolerance)


def check_conservation(steps: int = 30) -> CheckResult:
    """Measure the drift of the total mass of a periodic Burgers run with shocks, mesh movement and limiting."""
    return _conservation('conservation', RunConfig(problem='burgers-shock', resolution=40, limiter=True), steps, 1e-11)


def check_conservation_2d(steps: int = 10) -> CheckResult:
    """Measure the drift of the total mass of a periodic 2D Burgers run with mesh movement and limiting."""
    config = RunConfig(problem='burgers-2d-shock', resolution=8, limiter=True)
    return _conservation('conservation 2d', config, steps, 1e-11)


def check_limiter_means() -> CheckResult:
    """Limit discontinuous data of the scalar and the characteristic path and compare the cell averages."""
    euler, euler_2d = Euler(1), Euler(2)

    def scalar_data(points: np.ndarray) -> np.ndarray:
        return np.where(points[..., :1] < 0.3, 1.0, -0.5) + 0.1 * np.sin(7 * points[..., :1])

    def tube_data(points: np.ndarray) -> np.ndarray:
        return euler.from_primitive(np.where(points[..., :1] < 0.5, [1.0, 0.0, 1.0], [0.125, 0.0, 0.1]))

    def oblique_data(points: np.ndarray) -> np.ndarray:
        inside = points[..., :1] + 0.5 * points[..., 1:] < 0.6
        return euler_2d.from_primitive(np.where(inside, [1.0, 0.2, 0.0, 1.0], [0.2, 0.0, 0.1, 0.2]))

    cases: list[tuple[Mesh, ConservationLaw, t.Callable[[np.ndarray], np.ndarray]]] = [
        (generate_interval(20, 0.0, 1.0), Burgers(1), scalar_data),
        (generate_interval(20, 0.0, 1.0), euler, tube_data),
        (generate_criss_cross(6, 6), euler_2d, oblique_data),
    ]

    worst = 0.0
    for mesh, law, data in cases:
        boundaries = {name: OutflowBoundary() for name in mesh.boundary_names}
        for k in (1, 2):
            discretization = Discretization(mesh, law, k, boundaries)
            state = project_initial(data, mesh, build_basis(mesh.dimension, k), law.n_components)
            geometry = compute_geometry(mesh.points[mesh.cells])
            limited, _ = Limiter(discretization).apply(state.coefficients, geometry)
            before = state.averages()
            after = state.replace(limited).averages()
            worst = max(worst, float(np.abs(after - before).max() / np.abs(before).max()))
    return CheckResult('limiter means', worst, 1e-13)


CHECKS: dict[str, t.Callable[[], CheckResult]] = {
    'quadrature': check_quadrature,
    'eigensystem': check_eigensystem,
    'mesh-gradient': check_mesh_gradient,
    'metric-scaling': check_metric_scaling,
    'free-stream': check_free_stream,
    'conservation': check_conservation,
    'conservation-2d': check_conservation_2d,
    'limiter-means': check_limiter_means,
}


def run_checks(names: t.Iterable[str] | None = None) -> list[CheckResult]:
    """Run the named checks, all of them by default.

    :raises ValueError: for an unknown check name.
    """
    selected = list(CHECKS) if names is None else list(names)
    unknown = sorted(set(selected) - set(CHECKS))
    if unknown:
        raise ValueError(f'unknown checks {unknown}, choose from {sorted(CHECKS)}')

    results = []
    for name in selected:
        result = CHECKS[name]()
        (_LOGGER.info if result.passed else _LOGGER.error)('%s', result.to_text())
        results.append(result)
    return results
