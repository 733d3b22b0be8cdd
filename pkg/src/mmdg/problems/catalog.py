"""Catalog of the test problems: data, geometry, boundary conditions and exact solutions."""

from __future__ import annotations

import dataclasses
import math
import typing as t

import numpy as np
import pydantic
from pydantic import Field

from ..exceptions import ConfigurationError
from ..mesh import generate_criss_cross, generate_interval
from ..physics import Euler, make_law
from ..solver import DirichletBoundary, OutflowBoundary, ReflectiveBoundary, SplitBoundary
from .exact import (
    exact_burgers_2d,
    exact_burgers_riemann,
    exact_burgers_sine,
    exact_euler_advection,
    exact_euler_advection_2d,
)
from .riemann import ExactRiemannSolver

if t.TYPE_CHECKING:
    from ..mesh import Mesh
    from ..physics import ConservationLaw
    from ..solver import BoundaryCondition

__all__ = ('ExactSolution', 'ProblemSpec', 'catalog', 'get_problem')

ExactSolution = t.Callable[[np.ndarray, float], np.ndarray]
"""Callable mapping points of shape ``(..., d)`` and a time to conserved states of shape ``(..., m)``."""

BoundaryKind = t.Literal['outflow', 'reflective', 'inflow', 'exact', 'post-shock-wall']
ExactKind = t.Literal['closed-form', 'newton', 'riemann', 'reference', 'none']

GAMMA = 1.4
SQRT3 = math.sqrt(3.0)
DOUBLE_MACH_POST = (8.0, 57.1597, -33.0012, 563.544)
DOUBLE_MACH_PRE = (1.4, 0.0, 0.0, 2.5)


class ProblemSpec(pydantic.BaseModel):
    """Definition of a test problem."""

    model_config = pydantic.ConfigDict(frozen=True)

    name: str = Field(title='Name', description='Identifier of the problem in the catalog.')
    law: t.Literal['burgers', 'euler'] = Field(title='Law', description='The conservation law.')
    domain: tuple[tuple[float, float], ...] = Field(
        title='Domain', description='Interval per coordinate direction of the bounding box of the domain.'
    )
    holes: tuple[tuple[tuple[float, float], tuple[float, float]], ...] = Field(
        default=(), title='Holes', description='Rectangles removed from a two dimensional domain.'
    )
    periodic: bool = Field(default=False, title='Periodic', description='Glue opposite sides of the domain.')
    t_final: float = Field(title='Final time', description='End of the simulated time interval.', gt=0)
    boundaries: dict[str, BoundaryKind] = Field(
        default_factory=dict, title='Boundaries', description='Boundary condition per named boundary segment.'
    )
    tau: float = Field(title='Mesh time scale', description='Time scale of the mesh movement.', gt=0)
    beta: float = Field(
        default=10.0, title='Adaptation parameter', description='Weight of the Euler adaptation scalar.', ge=0
    )
    limiter: bool = Field(default=True, title='Limiter', description='Whether the limiter is enabled by default.')
    exact: ExactKind = Field(default='none', title='Exact solution', description='Kind of the error reference.')
    description: str = Field(default='', title='Description', description='Short description of the problem.')

    @property
    def dimension(self) -> int:
        """Return the spatial dimension."""
        return len(self.domain)

    @property
    def has_exact(self) -> bool:
        """Return whether an analytic solution is available."""
        return self.exact in ('closed-form', 'newton', 'riemann')

    def build_law(self) -> ConservationLaw:
        """Return the conservation law of the problem."""
        return make_law(self.law, self.dimension)

    def grid_shape(self, resolution: int) -> tuple[int, ...]:
        """Return the number of grid cells per direction for a resolution along the first direction.

        :raises ConfigurationError: if the resolution does not resolve the holes of the domain.
        """
        if resolution < 1:
            raise ConfigurationError(f'resolution should be at least 1, got {resolution}')
        if self.dimension == 1:
            return (resolution,)
        (x0, x1), (y0, y1) = self.domain
        size = (x1 - x0) / resolution
        shape = (resolution, max(1, round((y1 - y0) / size)))
        for hole in self.holes:
            for (low, high), origin in zip(hole, (x0, y0)):
                for edge in (low, high):
                    cells = (edge - origin) / size
                    if abs(cells - round(cells)) > 1e-9:
                        raise ConfigurationError(
                            f'resolution {resolution} does not align with the holes of `{self.name}`'
                        )
        return shape

    def build_mesh(self, resolution: int) -> Mesh:
        """Return the initial uniform mesh for a resolution."""
        shape = self.grid_shape(resolution)
        if self.dimension == 1:
            ((a, b),) = self.domain
            return generate_interval(shape[0], a, b, periodic=self.periodic)
        (x0, x1), (y0, y1) = self.domain
        return generate_criss_cross(
            shape[0], shape[1], ((x0, x1), (y0, y1)), periodic=self.periodic, holes=self.holes
        )

    def initial_condition(self) -> t.Callable[[np.ndarray], np.ndarray]:
        """Return the initial condition as conserved variables."""
        return _SETUPS[self.name].initial

    def exact_solution(self) -> ExactSolution | None:
        """Return the exact solution, ``None`` if the problem has none."""
        return _SETUPS[self.name].exact

    def build_boundaries(self, law: ConservationLaw) -> dict[str, BoundaryCondition]:
        """Return the boundary conditions keyed by boundary segment name."""
        initial = self.initial_condition()
        exact = self.exact_solution()
        result: dict[str, BoundaryCondition] = {}
        for segment, kind in self.boundaries.items():
            if kind == 'outflow':
                result[segment] = OutflowBoundary()
            elif kind == 'reflective':
                result[segment] = ReflectiveBoundary()
            elif kind == 'inflow':
                result[segment] = DirichletBoundary(lambda points, time: initial(points))
            elif kind == 'exact':
                if exact is None:
                    raise ConfigurationError(f'problem `{self.name}` has no exact solution for boundary `{segment}`')
                result[segment] = DirichletBoundary(exact)
            else:
                result[segment] = SplitBoundary(
                    lambda points, time: points[:, 0] < 1.0 / 6.0,
                    DirichletBoundary(lambda points, time: _double_mach_post(points.shape[:-1])),
                    ReflectiveBoundary(),
                )
        return result


@dataclasses.dataclass(frozen=True)
class _Setup:
    initial: t.Callable[[np.ndarray], np.ndarray]
    exact: ExactSolution | None = None


def _scalar(function: t.Callable[[np.ndarray, float], np.ndarray]) -> t.Callable[[np.ndarray, float], np.ndarray]:
    """Return a solution of a one dimensional scalar problem taking points with a trailing coordinate axis."""

    def wrapped(points: np.ndarray, time: float) -> np.ndarray:
        return function(points[..., 0], time)[..., None]

    return wrapped


def _riemann_exact(
    left: tuple[float, float, float], right: tuple[float, float, float], position: float = 0.0
) -> ExactSolution:
    """Return the exact solution of a Riemann problem of the Euler equations as conserved variables."""
    solver = ExactRiemannSolver(GAMMA)
    law = Euler(1, GAMMA)

    def solution(points: np.ndarray, time: float) -> np.ndarray:
        x = points[..., 0] - position
        if time == 0:
            primitive = np.where((x < 0)[..., None], np.array(left), np.array(right))
        else:
            primitive = solver.sample(left, right, x / time)
        return law.from_primitive(primitive)

    return solution


def _pieces(
    breaks: t.Sequence[float],
    states: t.Sequence[t.Callable[[np.ndarray], np.ndarray] | tuple[float, ...]],
    dimension: int,
) -> t.Callable[[np.ndarray], np.ndarray]:
    """Return piecewise primitive data in the first coordinate as conserved variables."""
    law = Euler(dimension, GAMMA)

    def initial(points: np.ndarray) -> np.ndarray:
        x = points[..., 0]
        index = np.searchsorted(np.asarray(breaks), x, side='right')
        primitive = np.zeros((*x.shape, dimension + 2))
        for position, state in enumerate(states):
            mask = index == position
            value = state(x[mask]) if callable(state) else np.array(state)
            primitive[mask] = value
        return law.from_primitive(primitive)

    return initial


def _shu_osher_right(x: np.ndarray) -> np.ndarray:
    return np.stack((1.0 + 0.2 * np.sin(5.0 * x), np.zeros_like(x), np.ones_like(x)), axis=-1)


def _double_mach_post(shape: tuple[int, ...]) -> np.ndarray:
    """Return the post-shock state of the double Mach reflection as conserved variables."""
    return np.broadcast_to(np.array(DOUBLE_MACH_POST), (*shape, 4)).copy()


def _double_mach_state(points: np.ndarray, time: float) -> np.ndarray:
    """Return the exact Mach 10 shock profile ``y >= sqrt(3) (x - 1/6) - 20 t`` as conserved variables."""
    behind = points[..., 1] >= SQRT3 * (points[..., 0] - 1.0 / 6.0) - 20.0 * time
    return np.where(behind[..., None], np.array(DOUBLE_MACH_POST), np.array(DOUBLE_MACH_PRE))


def _forward_step_state(points: np.ndarray) -> np.ndarray:
    return np.broadcast_to(Euler(2, GAMMA).from_primitive([1.4, 3.0, 0.0, 1.0]), (*points.shape[:-1], 4)).copy()


SOD = ((1.0, 0.0, 1.0), (0.125, 0.0, 0.1))
LAX = ((0.445, 0.698, 3.528), (0.5, 0.0, 0.571))

_SETUPS: dict[str, _Setup] = {
    'burgers-smooth': _Setup(
        initial=lambda points: 0.5 + np.sin(np.pi * points[..., 0]),
        exact=_scalar(lambda x, time: exact_burgers_sine(x, time)),
    ),
    'burgers-shock': _Setup(
        initial=lambda points: 0.5 + np.sin(np.pi * points[..., 0]),
        exact=_scalar(lambda x, time: exact_burgers_sine(x, time)),
    ),
    'burgers-riemann': _Setup(
        initial=lambda points: np.where(points[..., 0] <= 0.0, 1.0, 0.0),
        exact=_scalar(lambda x, time: exact_burgers_riemann(x, time)),
    ),
    'euler-advection': _Setup(
        initial=lambda points: exact_euler_advection(points, 0.0),
        exact=exact_euler_advection,
    ),
    'sod': _Setup(initial=_pieces([0.0], SOD, 1), exact=_riemann_exact(*SOD)),
    'lax': _Setup(initial=_pieces([0.0], LAX, 1), exact=_riemann_exact(*LAX)),
    'shu-osher': _Setup(initial=_pieces([-4.0], ((3.857143, 2.629369, 10.333333), _shu_osher_right), 1)),
    'blast-wave': _Setup(
        initial=_pieces([0.1, 0.9], ((1.0, 0.0, 1000.0), (1.0, 0.0, 0.01), (1.0, 0.0, 100.0)), 1)
    ),
    'burgers-2d': _Setup(
        initial=lambda points: 0.5 + np.sin(0.5 * np.pi * (points[..., 0] + points[..., 1])),
        exact=lambda points, time: exact_burgers_2d(points, time)[..., None],
    ),
    'burgers-2d-shock': _Setup(
        initial=lambda points: 0.5 + np.sin(0.5 * np.pi * (points[..., 0] + points[..., 1])),
        exact=lambda points, time: exact_burgers_2d(points, time)[..., None],
    ),
    'euler-advection-2d': _Setup(
        initial=lambda points: exact_euler_advection_2d(points, 0.0),
        exact=exact_euler_advection_2d,
    ),
    'double-mach': _Setup(initial=lambda points: _double_mach_state(points, 0.0), exact=_double_mach_state),
    'forward-step': _Setup(initial=_forward_step_state),
}

_ENTRIES: tuple[ProblemSpec, ...] = (
    ProblemSpec(
        name='burgers-smooth',
        law='burgers',
        domain=((0.0, 2.0),),
        periodic=True,
        t_final=0.5 / math.pi,
        tau=0.1,
        limiter=False,
        exact='newton',
        description='Burgers equation with u0 = 0.5 + sin(pi x) before the shock forms.',
    ),
    ProblemSpec(
        name='burgers-shock',
        law='burgers',
        domain=((0.0, 2.0),),
        periodic=True,
        t_final=1.5 / math.pi,
        tau=0.1,
        exact='newton',
        description='Burgers equation with u0 = 0.5 + sin(pi x) after the shock has formed.',
    ),
    ProblemSpec(
        name='burgers-riemann',
        law='burgers',
        domain=((-1.0, 1.0),),
        t_final=1.0,
        boundaries={'left': 'outflow', 'right': 'outflow'},
        tau=0.1,
        exact='closed-form',
        description='Burgers equation with a unit step down at the origin.',
    ),
    ProblemSpec(
        name='euler-advection',
        law='euler',
        domain=((0.0, 2.0),),
        periodic=True,
        t_final=1.0,
        tau=0.1,
        beta=100.0,
        limiter=False,
        exact='closed-form',
        description='Density wave advected with unit velocity at unit pressure.',
    ),
    ProblemSpec(
        name='sod',
        law='euler',
        domain=((-5.0, 5.0),),
        t_final=2.0,
        boundaries={'left': 'outflow', 'right': 'outflow'},
        tau=1e-3,
        exact='riemann',
        description='Sod shock tube.',
    ),
    ProblemSpec(
        name='lax',
        law='euler',
        domain=((-5.0, 5.0),),
        t_final=1.3,
        boundaries={'left': 'outflow', 'right': 'outflow'},
        tau=1e-3,
        exact='riemann',
        description='Lax shock tube.',
    ),
    ProblemSpec(
        name='shu-osher',
        law='euler',
        domain=((-5.0, 5.0),),
        t_final=1.8,
        boundaries={'left': 'inflow', 'right': 'outflow'},
        tau=1e-3,
        exact='reference',
        description='Mach 3 shock interacting with a density sine wave.',
    ),
    ProblemSpec(
        name='blast-wave',
        law='euler',
        domain=((0.0, 1.0),),
        t_final=0.038,
        boundaries={'left': 'reflective', 'right': 'reflective'},
        tau=1e-3,
        beta=1.0,
        exact='reference',
        description='Interacting blast waves between reflective walls.',
    ),
    ProblemSpec(
        name='burgers-2d',
        law='burgers',
        domain=((0.0, 4.0), (0.0, 4.0)),
        periodic=True,
        t_final=0.5 / math.pi,
        tau=0.1,
        beta=1.0,
        limiter=False,
        exact='newton',
        description='2D Burgers equation with u0 = 0.5 + sin(pi (x + y) / 2) before the shock forms.',
    ),
    ProblemSpec(
        name='burgers-2d-shock',
        law='burgers',
        domain=((0.0, 4.0), (0.0, 4.0)),
        periodic=True,
        t_final=1.5 / math.pi,
        tau=0.1,
        beta=1.0,
        exact='newton',
        description='2D Burgers equation with u0 = 0.5 + sin(pi (x + y) / 2) after the shock has formed.',
    ),
    ProblemSpec(
        name='euler-advection-2d',
        law='euler',
        domain=((0.0, 2.0), (0.0, 2.0)),
        periodic=True,
        t_final=1.0,
        tau=0.1,
        beta=100.0,
        limiter=False,
        exact='closed-form',
        description='Density wave advected with velocity (0.7, 0.3) at unit pressure.',
    ),
    ProblemSpec(
        name='double-mach',
        law='euler',
        domain=((0.0, 4.0), (0.0, 1.0)),
        t_final=0.2,
        boundaries={'left': 'inflow', 'right': 'outflow', 'bottom': 'post-shock-wall', 'top': 'exact'},
        tau=1e-4,
        beta=1.0,
        description='Double Mach reflection of a Mach 10 shock.',
    ),
    ProblemSpec(
        name='forward-step',
        law='euler',
        domain=((0.0, 3.0), (0.0, 1.0)),
        holes=(((0.6, 3.0), (0.0, 0.2)),),
        t_final=4.0,
        boundaries={
            'left': 'inflow',
            'right': 'outflow',
            'bottom': 'reflective',
            'top': 'reflective',
            'step': 'reflective',
        },
        tau=1e-4,
        beta=1.0,
        description='Mach 3 wind tunnel with a forward facing step.',
    ),
)


def catalog() -> tuple[ProblemSpec, ...]:
    """Return all problems of the catalog."""
    return _ENTRIES


def get_problem(name: str) -> ProblemSpec:
    """Return the problem with the given name.

    :raises ConfigurationError: if the catalog has no such problem.
    """
    for problem in _ENTRIES:
        if problem.name == name:
            return problem
    names = ', '.join(problem.name for problem in _ENTRIES)
    raise ConfigurationError(f'unknown problem `{name}`, available: {names}')
