"""Tests for the :mod:`mmdg.mesh.export` module."""

import csv

import meshio
import numpy as np
import pytest
from mmdg.mesh import write_vertex_table, write_vtk


def test_write_vtk(tmp_path, criss_cross):
    """Test :func:`mmdg.mesh.write_vtk` writes a file that :mod:`meshio` reads back."""
    filepath = tmp_path / 'mesh.vtk'
    density = np.arange(criss_cross.n_elements, dtype=float)
    write_vtk(filepath, criss_cross, criss_cross.points, {'rho': density})

    grid = meshio.read(filepath)
    assert grid.points.shape == (criss_cross.n_vertices, 3)
    assert np.allclose(grid.points[:, :2], criss_cross.points)
    assert len(grid.cells_dict['triangle']) == criss_cross.n_elements
    assert np.allclose(grid.cell_data['rho'][0], density)


def test_write_vtk_interval(tmp_path, interval):
    """Test :func:`mmdg.mesh.write_vtk` for a one dimensional mesh."""
    filepath = tmp_path / 'mesh.vtk'
    write_vtk(filepath, interval, interval.points)
    assert 'UNSTRUCTURED_GRID' in filepath.read_text()


def test_write_vtk_invalid(tmp_path, criss_cross):
    """Test :func:`mmdg.mesh.write_vtk` raises for cell data of the wrong length."""
    with pytest.raises(ValueError, match='cell data `rho`'):
        write_vtk(tmp_path / 'mesh.vtk', criss_cross, criss_cross.points, {'rho': np.zeros(3)})


def test_write_vtk_unwritable(tmp_path, criss_cross):
    """Test :func:`mmdg.mesh.write_vtk` raises :class:`OSError` with the path if the file cannot be written."""
    with pytest.raises(OSError, match='failed to write VTK file'):
        write_vtk(tmp_path / 'missing' / 'mesh.vtk', criss_cross, criss_cross.points)


def test_write_vertex_table(tmp_path, criss_cross):
    """Test :func:`mmdg.mesh.write_vertex_table`."""
    filepath = tmp_path / 'vertices.csv'
    write_vertex_table(filepath, criss_cross, criss_cross.points)

    with filepath.open() as handle:
        rows = list(csv.reader(handle))

    assert rows[0] == ['id', 'x', 'y', 'boundary']
    assert len(rows) == criss_cross.n_vertices + 1
    classes = [row[-1] for row in rows[1:]]
    assert classes.count('fixed') == 4
    assert classes.count('sliding') == 6
    assert classes.count('interior') == 8
