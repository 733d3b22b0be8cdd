"""Space-time and final time error norms."""

from __future__ import annotations

import dataclasses
import math
import typing as t

import numpy as np

from ..approx import simplex_quadrature
from ..exceptions import ConfigurationError
from ..mesh import compute_geometry

if t.TYPE_CHECKING:
    from ..mesh import Mesh
    from ..problems import ExactSolution
    from ..solver import DGState

__all__ = ('ErrorAccumulator', 'ErrorReport', 'error_norms', 'pointwise_error')


@dataclasses.dataclass(frozen=True)
class ErrorReport:
    """Error norms of one run, for one conserved component."""

    l1: float
    l2: float
    linf: float
    final_l1: float
    final_l2: float
    final_linf: float

    def get(self, norm: str, *, final: bool = False) -> float:
        """Return a norm by name, ``l1``, ``l2`` or ``linf``."""
        return float(getattr(self, f'final_{norm}' if final else norm))

    def as_dict(self) -> dict[str, float]:
        """Return the norms as a dictionary."""
        return dataclasses.asdict(self)


def pointwise_error(
    mesh: Mesh,
    state: DGState,
    coordinates: np.ndarray,
    exact: ExactSolution,
    component: int = 0,
) -> tuple[np.ndarray, np.ndarray]:
    """Return the error at the points of a degree ``2k + 3`` rule on every element and the physical weights.

    :return: errors and weights, both of shape ``(n, q)``.
    """
    rule = simplex_quadrature(mesh.dimension, 2 * state.basis.degree + 3)
    geometry = compute_geometry(coordinates[mesh.cells])
    numerical = state.evaluate(rule.points)[..., component]
    reference = np.asarray(exact(geometry.to_physical(rule.points), state.time), dtype=float)
    if reference.ndim == numerical.ndim + 1:
        reference = reference[..., component]
    weights = rule.weights[None, :] * (geometry.volumes / state.basis.reference_volume)[:, None]
    return numerical - reference, weights


class ErrorAccumulator:
    """Accumulates ``int_0^T int_Omega |e|^q`` with the right endpoint rule in time."""

    def __init__(self, mesh: Mesh, exact: ExactSolution, component: int = 0):
        """Construct the accumulator.

        :param mesh: the mesh.
        :param exact: the exact solution.
        :param component: the conserved component whose error is measured.
        """
        self.mesh = mesh
        self.exact = exact
        self.component = component
        self._sums = [0.0, 0.0]
        self._maximum = 0.0
        self._final: tuple[float, float, float] | None = None

    def add(self, state: DGState, coordinates: np.ndarray, dt: float) -> None:
        """Add the contribution of a step of length ``dt`` ending at the time of the state."""
        errors, weights = pointwise_error(self.mesh, state, coordinates, self.exact, self.component)
        magnitude = np.abs(errors)
        l1 = float(np.sum(weights * magnitude))
        l2 = float(np.sum(weights * magnitude**2))
        linf = float(magnitude.max())
        self._sums[0] += dt * l1
        self._sums[1] += dt * l2
        self._maximum = max(self._maximum, linf)
        self._final = (l1, math.sqrt(l2), linf)

    def report(self) -> ErrorReport:
        """Return the norms accumulated so far.

        :raises ConfigurationError: if no step was added.
        """
        if self._final is None:
            raise ConfigurationError('no step has been added to the error accumulator')
        return ErrorReport(
            l1=self._sums[0],
            l2=math.sqrt(self._sums[1]),
            linf=self._maximum,
            final_l1=self._final[0],
            final_l2=self._final[1],
            final_linf=self._final[2],
        )


def error_norms(
    mesh: Mesh,
    history: t.Iterable[tuple[DGState, np.ndarray, float]],
    exact: ExactSolution | None,
    component: int = 0,
) -> ErrorReport:
    """Return the error norms of a history of ``(state, coordinates, dt)`` triples at the step ends.

    :raises ConfigurationError: if there is no exact solution or the history is empty.
    """
    if exact is None:
        raise ConfigurationError('error norms require an exact solution')
    accumulator = ErrorAccumulator(mesh, exact, component)
    for state, coordinates, dt in history:
        accumulator.add(state, coordinates, dt)
    return accumulator.report()
