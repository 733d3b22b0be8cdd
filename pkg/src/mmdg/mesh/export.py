"""Export of meshes and cell data to legacy VTK and CSV files."""

from __future__ import annotations

import csv
import logging
import pathlib
import typing as t

import meshio
import numpy as np

from .mesh import VERTEX_FIXED, VERTEX_SLIDING

if t.TYPE_CHECKING:
    from .mesh import Mesh

__all__ = ('write_vertex_table', 'write_vtk')

_LOGGER = logging.getLogger(__name__)

_CELL_TYPES = {1: 'line', 2: 'triangle'}
_VERTEX_CLASSES = {VERTEX_FIXED: 'fixed', VERTEX_SLIDING: 'sliding'}


def write_vtk(
    filepath: pathlib.Path | str,
    mesh: Mesh,
    coordinates: np.ndarray,
    cell_data: t.Mapping[str, np.ndarray] | None = None,
) -> None:
    """Write the mesh with optional per-element data as a legacy ASCII unstructured grid.

    :param filepath: the destination file.
    :param mesh: the mesh providing the connectivity.
    :param coordinates: vertex coordinates, padded with zeros to three dimensions.
    :param cell_data: arrays with one entry, or one row of components, per element.
    :raises ValueError: if a cell data array does not have one row per element.
    :raises OSError: if the file cannot be written.
    """
    points = np.zeros((mesh.n_vertices, 3))
    points[:, : mesh.dimension] = coordinates

    normalized = {}
    for name, values in (cell_data or {}).items():
        array = np.asarray(values, dtype=float)
        if array.shape[0] != mesh.n_elements:
            raise ValueError(f'cell data `{name}` has {array.shape[0]} rows for {mesh.n_elements} elements')
        normalized[name] = [array]

    grid = meshio.Mesh(points=points, cells=[(_CELL_TYPES[mesh.dimension], mesh.cells)], cell_data=normalized)

    try:
        meshio.write(str(filepath), grid, file_format='vtk', binary=False)
    except OSError as exception:
        raise OSError(f'failed to write VTK file `{filepath}`: {exception}') from exception

    _LOGGER.debug('VTK written to `%s` (%d vertices, %d cells)', filepath, mesh.n_vertices, mesh.n_elements)


def write_vertex_table(filepath: pathlib.Path | str, mesh: Mesh, coordinates: np.ndarray) -> None:
    """Write the vertex coordinates and boundary classification as CSV with columns ``id, x[, y], boundary``."""
    header = ['id', 'x', 'y'][: mesh.dimension + 1] + ['boundary']

    try:
        with pathlib.Path(filepath).open('w', newline='') as handle:
            writer = csv.writer(handle)
            writer.writerow(header)
            for index, (point, kind) in enumerate(zip(coordinates, mesh.vertex_kinds)):
                writer.writerow([index, *(f'{value:.16e}' for value in point), _VERTEX_CLASSES.get(kind, 'interior')])
    except OSError as exception:
        raise OSError(f'failed to write vertex table `{filepath}`: {exception}') from exception
