"""Refinement studies: error tables with observed orders."""

from __future__ import annotations

import csv
import dataclasses
import logging
import math
import typing as t

from ..exceptions import ConfigurationError, NumericalError
from ..problems import make_reference
from .run import run

if t.TYPE_CHECKING:
    import pathlib

    from .config import NormName, RunConfig
    from .norms import ErrorReport

__all__ = (
    'Comparison',
    'ConvergenceRow',
    'ConvergenceTable',
    'compare_moving_uniform',
    'convergence_study',
    'observed_order',
    'sweeps_study',
)

_LOGGER = logging.getLogger(__name__)

MIN_RESOLUTIONS = 3

_NORMS: tuple[NormName, ...] = ('l1', 'l2', 'linf')
_TITLES = {'l1': 'L1', 'l2': 'L2', 'linf': 'Linf'}


def observed_order(coarse: float, fine: float, n_coarse: int, n_fine: int) -> float:
    """Return the order ``log(e_c / e_f) / log(N_f / N_c)``, NaN if an error is not positive."""
    if not (coarse > 0 and fine > 0) or n_fine == n_coarse:
        return math.nan
    return math.log(coarse / fine) / math.log(n_fine / n_coarse)


@dataclasses.dataclass(frozen=True)
class ConvergenceRow:
    """Errors of one resolution, or the reason its run failed."""

    resolution: int
    errors: ErrorReport | None
    failure: str | None = None


@dataclasses.dataclass(frozen=True)
class ConvergenceTable:
    """Rows of a refinement study in increasing resolution."""

    rows: tuple[ConvergenceRow, ...]
    final: bool = False
    """Whether the final time norms are tabulated instead of the space-time norms."""

    def error(self, index: int, norm: NormName) -> float:
        """Return an error of a row, NaN for a failed row."""
        errors = self.rows[index].errors
        return math.nan if errors is None else errors.get(norm, final=self.final)

    def orders(self, norm: NormName) -> list[float]:
        """Return the observed orders between consecutive rows, NaN for the first row."""
        result = [math.nan]
        for index in range(1, len(self.rows)):
            result.append(
                observed_order(
                    self.error(index - 1, norm),
                    self.error(index, norm),
                    self.rows[index - 1].resolution,
                    self.rows[index].resolution,
                )
            )
        return result

    def _cells(self) -> list[list[str]]:
        orders = {norm: self.orders(norm) for norm in _NORMS}
        cells = []
        for index, row in enumerate(self.rows):
            line = [str(row.resolution)]
            for norm in _NORMS:
                if row.errors is None:
                    line.extend(['failed', '-'])
                    continue
                order = orders[norm][index]
                line.extend([f'{self.error(index, norm):.3e}', '-' if math.isnan(order) else f'{order:.2f}'])
            cells.append(line)
        return cells

    @staticmethod
    def header() -> list[str]:
        """Return the column titles."""
        return ['N', *(title for norm in _NORMS for title in (_TITLES[norm], 'order'))]

    def to_text(self) -> str:
        """Return the table as aligned text."""
        lines = [self.header(), *self._cells()]
        widths = [max(len(line[column]) for line in lines) for column in range(len(lines[0]))]
        text = '\n'.join('  '.join(cell.rjust(width) for cell, width in zip(line, widths)) for line in lines)
        failures = [f'N={row.resolution}: {row.failure}' for row in self.rows if row.failure]
        return '\n'.join([text, *failures])

    def write_csv(self, filepath: pathlib.Path) -> None:
        """Write the table as CSV.

        :raises OSError: if the file cannot be written.
        """
        try:
            with filepath.open('w', newline='') as handle:
                writer = csv.writer(handle)
                writer.writerow(self.header())
                writer.writerows(self._cells())
        except OSError as exception:
            raise OSError(f'failed to write convergence table `{filepath}`: {exception}') from exception


def convergence_study(
    template: RunConfig, resolutions: t.Sequence[int], *, final: bool = False
) -> ConvergenceTable:
    """Run a problem at increasing resolutions and tabulate the errors and observed orders.

    A run that fails is marked in its row and the study continues with the next resolution.

    :param template: configuration of the runs, its resolution is replaced.
    :param resolutions: at least three resolutions.
    :param final: tabulate the final time norms instead of the space-time norms.
    :raises ConfigurationError: for fewer than three resolutions or a problem without an exact solution.
    """
    resolutions = sorted(set(resolutions))
    if len(resolutions) < MIN_RESOLUTIONS:
        raise ConfigurationError(f'a convergence study needs at least {MIN_RESOLUTIONS} resolutions, got {resolutions}')
    if not template.spec.has_exact:
        raise ConfigurationError(f'problem `{template.problem}` has no exact solution to measure errors against')

    rows = []
    for resolution in resolutions:
        config = template.model_copy(update={'resolution': resolution, 'output': None})
        try:
            result = run(config)
        except NumericalError as exception:
            _LOGGER.warning('run with N=%d failed: %s', resolution, exception)
            rows.append(ConvergenceRow(resolution, None, str(exception)))
            continue
        rows.append(ConvergenceRow(resolution, result.errors))
        if result.errors is not None:
            _LOGGER.info('N=%d: L1 error %.3e', resolution, result.errors.get('l1', final=final))

    return ConvergenceTable(tuple(rows), final=final)


def sweeps_study(
    template: RunConfig, resolutions: t.Sequence[int], sweeps: t.Sequence[int], *, final: bool = False
) -> dict[int, ConvergenceTable]:
    """Return a convergence table for each number of metric smoothing sweeps."""
    return {
        count: convergence_study(template.model_copy(update={'sweeps': count}), resolutions, final=final)
        for count in sweeps
    }


@dataclasses.dataclass(frozen=True)
class Comparison:
    """Final time L1 deviation of a moving and a uniform mesh run at the same resolution."""

    resolution: int
    moving: float
    uniform: float

    def to_text(self) -> str:
        """Return the comparison as text."""
        return f'N={self.resolution}: moving {self.moving:.4e}, uniform {self.uniform:.4e}'


def compare_moving_uniform(template: RunConfig) -> Comparison:
    """Return the final time L1 deviation of density, or of the scalar, with the mesh moving and at rest.

    Problems without an exact solution are measured against their fine mesh reference.

    :raises ConfigurationError: if the problem has neither an exact solution nor a reference.
    """
    spec = template.spec
    exact = spec.exact_solution()
    if exact is None:
        if spec.exact != 'reference':
            raise ConfigurationError(f'problem `{spec.name}` has no solution to compare against')
        exact = make_reference(spec.name, cache_dir=template.reference_dir)

    deviations = []
    for moving in (True, False):
        result = run(template.model_copy(update={'moving': moving, 'output': None}))
        deviations.append(result.deviation(exact))

    return Comparison(template.resolution, moving=deviations[0], uniform=deviations[1])
