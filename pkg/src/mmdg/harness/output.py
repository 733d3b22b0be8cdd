"""Output files of a run: solution tables, VTK snapshots, mesh trajectories and troubled cells."""

from __future__ import annotations

import csv
import logging
import pathlib
import typing as t

import numpy as np

from ..mesh import compute_geometry, write_vertex_table, write_vtk

if t.TYPE_CHECKING:
    from ..limiter import TroubleFlags
    from ..mesh import Mesh
    from ..solver import DGState

__all__ = ('OutputWriter', 'write_solution_table')

_LOGGER = logging.getLogger(__name__)

_COORDINATES = ('x', 'y')


def _format(value: float) -> str:
    return f'{value:.16e}'


def write_solution_table(
    filepath: pathlib.Path, mesh: Mesh, state: DGState, coordinates: np.ndarray, names: t.Sequence[str]
) -> None:
    """Write one row per element: id, barycenter, cell averages and the solution at the barycenter.

    :raises OSError: if the file cannot be written.
    """
    geometry = compute_geometry(coordinates[mesh.cells])
    averages = state.averages()
    center = np.full((1, mesh.dimension), 1.0 / (mesh.dimension + 1))
    samples = state.evaluate(center)[:, 0, :]
    header = [
        'element',
        *_COORDINATES[: mesh.dimension],
        *(f'mean_{name}' for name in names),
        *(f'point_{name}' for name in names),
    ]

    try:
        with filepath.open('w', newline='') as handle:
            writer = csv.writer(handle)
            writer.writerow(header)
            for element in range(mesh.n_elements):
                row = [*geometry.barycenters[element], *averages[element], *samples[element]]
                writer.writerow([element, *(_format(value) for value in row)])
    except OSError as exception:
        raise OSError(f'failed to write solution table `{filepath}`: {exception}') from exception


class OutputWriter:
    """Writes the output files of a run into a directory."""

    def __init__(self, directory: pathlib.Path, mesh: Mesh, names: t.Sequence[str], cadence: int = 0):
        """Construct the writer and create the directory.

        :param directory: the output directory.
        :param mesh: the mesh.
        :param names: names of the conserved components.
        :param cadence: write snapshots every this many steps, only the first and last if zero.
        :raises OSError: if the directory cannot be created.
        """
        try:
            directory.mkdir(parents=True, exist_ok=True)
        except OSError as exception:
            raise OSError(f'failed to create output directory `{directory}`: {exception}') from exception

        self.directory = directory
        self.mesh = mesh
        self.names = tuple(names)
        self.cadence = cadence
        self._trajectory = directory / 'trajectory.csv'
        self._troubled = directory / 'troubled.csv'
        self._append(self._trajectory, ['step', 'time', 'vertex', *_COORDINATES[: mesh.dimension]], mode='w')
        self._append(self._troubled, ['step', 'time', 'element', 'reason'], mode='w')

    def _append(self, filepath: pathlib.Path, *rows: t.Sequence[t.Any], mode: str = 'a') -> None:
        try:
            with filepath.open(mode, newline='') as handle:
                csv.writer(handle).writerows(rows)
        except OSError as exception:
            raise OSError(f'failed to write `{filepath}`: {exception}') from exception

    def is_due(self, step: int, final: bool = False) -> bool:
        """Return whether a snapshot is due after a step."""
        return final or step == 0 or (self.cadence > 0 and step % self.cadence == 0)

    def snapshot(self, step: int, state: DGState, coordinates: np.ndarray) -> None:
        """Write the solution table and, in 2D, the VTK file of a step.

        The snapshot of step zero also writes the vertex table of the initial mesh.
        """
        if step == 0:
            write_vertex_table(self.directory / 'vertices.csv', self.mesh, coordinates)
        write_solution_table(self.directory / f'solution_{step:06d}.csv', self.mesh, state, coordinates, self.names)
        if self.mesh.dimension == 2:
            cell_data = {name: state.averages()[:, index] for index, name in enumerate(self.names)}
            write_vtk(self.directory / f'solution_{step:06d}.vtk', self.mesh, coordinates, cell_data)
        _LOGGER.info('snapshot of step %d written to `%s`', step, self.directory)

    def record(self, step: int, time: float, coordinates: np.ndarray, flags: TroubleFlags | None) -> None:
        """Append the vertex positions and the troubled cells of a step."""
        stamp = _format(time)
        self._append(
            self._trajectory,
            *([step, stamp, vertex, *(_format(value) for value in point)] for vertex, point in enumerate(coordinates)),
        )
        if flags is not None and flags.count:
            self._append(
                self._troubled,
                *([step, stamp, int(element), int(flags.reasons[element])] for element in flags.elements),
            )

    def dump(self, state: DGState, coordinates: np.ndarray) -> pathlib.Path:
        """Write the state after a failure and return the path of the file."""
        filepath = self.directory / 'failure_state.csv'
        write_solution_table(filepath, self.mesh, state, coordinates, self.names)
        return filepath
