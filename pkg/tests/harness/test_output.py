"""Tests for the :mod:`mmdg.harness.output` module."""

import csv

import meshio
import numpy as np
from mmdg.approx import build_basis
from mmdg.harness import OutputWriter, write_solution_table
from mmdg.limiter import REASON_MINMOD, TroubleFlags
from mmdg.mesh import generate_interval
from mmdg.solver import project_initial


def read(filepath):
    """Return the rows of a CSV file."""
    with filepath.open(newline='') as handle:
        return list(csv.reader(handle))


def test_write_solution_table(tmp_path):
    """Test :func:`mmdg.harness.write_solution_table`."""
    mesh = generate_interval(4, 0.0, 1.0)
    state = project_initial(lambda points: 2.0 * points[..., 0], mesh, build_basis(1, 1), 1)
    filepath = tmp_path / 'solution.csv'
    write_solution_table(filepath, mesh, state, mesh.points, ('u',))

    rows = read(filepath)
    assert rows[0] == ['element', 'x', 'mean_u', 'point_u']
    assert len(rows) == 5
    assert rows[1][0] == '0'
    assert np.allclose([float(value) for value in rows[1][1:]], [0.125, 0.25, 0.25])


def test_output_writer(tmp_path):
    """Test that :class:`mmdg.harness.OutputWriter` writes the files of a one dimensional run."""
    mesh = generate_interval(4, 0.0, 1.0)
    state = project_initial(lambda points: points[..., 0], mesh, build_basis(1, 1), 1)
    directory = tmp_path / 'nested' / 'output'
    writer = OutputWriter(directory, mesh, ('u',), cadence=2)
    assert read(directory / 'trajectory.csv') == [['step', 'time', 'vertex', 'x']]
    assert read(directory / 'troubled.csv') == [['step', 'time', 'element', 'reason']]

    writer.snapshot(0, state, mesh.points)
    writer.record(1, 0.1, mesh.points, None)
    flags = TroubleFlags(troubled=np.array([False, True, False, False]), reasons=np.array([0, REASON_MINMOD, 0, 0]))
    writer.record(2, 0.2, mesh.points, flags)

    vertices = read(directory / 'vertices.csv')
    assert vertices[0] == ['id', 'x', 'boundary']
    assert [row[-1] for row in vertices[1:]] == ['fixed', 'interior', 'interior', 'interior', 'fixed']
    assert len(read(directory / 'solution_000000.csv')) == 5
    assert len(read(directory / 'trajectory.csv')) == 1 + 2 * 5
    assert read(directory / 'troubled.csv')[1][::2] == ['2', '1']
    assert not (directory / 'solution_000000.vtk').exists()


def test_output_writer_cadence(tmp_path, interval):
    """Test :meth:`mmdg.harness.OutputWriter.is_due`."""
    writer = OutputWriter(tmp_path, interval, ('u',), cadence=3)
    assert writer.is_due(0)
    assert not writer.is_due(2)
    assert writer.is_due(6)
    assert writer.is_due(7, final=True)
    assert not OutputWriter(tmp_path, interval, ('u',)).is_due(6)


def test_output_writer_vtk(tmp_path, criss_cross):
    """Test that two dimensional snapshots include a VTK file with the cell averages."""
    state = project_initial(lambda points: points[..., 1], criss_cross, build_basis(2, 1), 1)
    writer = OutputWriter(tmp_path, criss_cross, ('u',))
    writer.snapshot(12, state, criss_cross.points)
    grid = meshio.read(tmp_path / 'solution_000012.vtk')
    assert np.allclose(grid.cell_data['u'][0], state.averages()[:, 0])
    assert read(tmp_path / 'solution_000012.csv')[0] == ['element', 'x', 'y', 'mean_u', 'point_u']


def test_output_writer_dump(tmp_path, interval):
    """Test :meth:`mmdg.harness.OutputWriter.dump`."""
    state = project_initial(lambda points: points[..., 0], interval, build_basis(1, 2), 1)
    filepath = OutputWriter(tmp_path, interval, ('u',)).dump(state, interval.points)
    assert filepath == tmp_path / 'failure_state.csv'
    assert len(read(filepath)) == interval.n_elements + 1
