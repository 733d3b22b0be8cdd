"""Tests for the :mod:`mmdg.harness.convergence` module."""

import importlib
import math
import types

import pytest
from mmdg.exceptions import AdmissibilityError, ConfigurationError
from mmdg.harness import (
    Comparison,
    ConvergenceRow,
    ConvergenceTable,
    ErrorReport,
    RunConfig,
    compare_moving_uniform,
    convergence_study,
    observed_order,
    sweeps_study,
)


def report(value):
    """Return an error report with every norm equal to a value."""
    return ErrorReport(l1=value, l2=value, linf=value, final_l1=value, final_l2=2 * value, final_linf=value)


@pytest.fixture
def table():
    """Return a table of second order errors with a failed last row."""
    rows = (
        ConvergenceRow(10, report(1e-2)),
        ConvergenceRow(20, report(2.5e-3)),
        ConvergenceRow(40, None, 'negative density'),
    )
    return ConvergenceTable(rows)


@pytest.fixture
def fake_run(monkeypatch):
    """Replace the runs of the studies by second order errors, failing at ``N = 40``; return the configurations."""
    configs = []

    def run(config):
        """Return errors proportional to ``N^-2``."""
        configs.append(config)
        if config.resolution == 40:
            raise AdmissibilityError('negative density')
        return types.SimpleNamespace(errors=report(1.0 / config.resolution**2))

    monkeypatch.setattr(importlib.import_module('mmdg.harness.convergence'), 'run', run)
    return configs


def test_observed_order():
    """Test :func:`mmdg.harness.observed_order`."""
    assert observed_order(1e-2, 2.5e-3, 10, 20) == pytest.approx(2.0)
    assert observed_order(1e-2, 1e-3, 10, 10 * 10**0.5) == pytest.approx(2.0)
    assert math.isnan(observed_order(0.0, 1e-3, 10, 20))
    assert math.isnan(observed_order(1e-2, math.nan, 10, 20))
    assert math.isnan(observed_order(1e-2, 1e-3, 10, 10))


def test_table(table):
    """Test the errors and orders of :class:`mmdg.harness.ConvergenceTable`."""
    assert table.error(1, 'l2') == 2.5e-3
    assert math.isnan(table.error(2, 'l1'))
    orders = table.orders('l1')
    assert math.isnan(orders[0])
    assert orders[1] == pytest.approx(2.0)
    assert math.isnan(orders[2])

    final = ConvergenceTable(table.rows, final=True)
    assert final.error(0, 'l2') == 2e-2


def test_table_text(table):
    """Test :meth:`mmdg.harness.ConvergenceTable.to_text`."""
    lines = table.to_text().splitlines()
    assert lines[0].split() == ['N', 'L1', 'order', 'L2', 'order', 'Linf', 'order']
    assert lines[1].split() == ['10', '1.000e-02', '-', '1.000e-02', '-', '1.000e-02', '-']
    assert lines[2].split() == ['20', '2.500e-03', '2.00', '2.500e-03', '2.00', '2.500e-03', '2.00']
    assert lines[3].split() == ['40', 'failed', '-', 'failed', '-', 'failed', '-']
    assert lines[4] == 'N=40: negative density'


def test_table_csv(table, tmp_path):
    """Test :meth:`mmdg.harness.ConvergenceTable.write_csv`."""
    filepath = tmp_path / 'table.csv'
    table.write_csv(filepath)
    lines = filepath.read_text().splitlines()
    assert lines[0] == 'N,L1,order,L2,order,Linf,order'
    assert lines[2] == '20,2.500e-03,2.00,2.500e-03,2.00,2.500e-03,2.00'
    assert len(lines) == 4


def test_convergence_study(fake_run):
    """Test :func:`mmdg.harness.convergence_study` with the runs replaced."""
    template = RunConfig(problem='burgers-smooth', output='ignored')
    table = convergence_study(template, [80, 10, 20, 40, 20])

    assert [row.resolution for row in table.rows] == [10, 20, 40, 80]
    assert [config.resolution for config in fake_run] == [10, 20, 40, 80]
    assert all(config.output is None for config in fake_run)
    assert table.rows[2].failure == 'negative density'
    assert table.orders('l2')[1] == pytest.approx(2.0)
    assert math.isnan(table.orders('l2')[3])


@pytest.mark.parametrize(
    ('problem', 'resolutions', 'message'),
    (
        ('burgers-smooth', [10, 20, 20], 'at least 3 resolutions'),
        ('shu-osher', [10, 20, 40], 'no exact solution'),
    ),
)
def test_convergence_study_invalid(problem, resolutions, message):
    """Test that :func:`mmdg.harness.convergence_study` rejects invalid studies."""
    with pytest.raises(ConfigurationError, match=message):
        convergence_study(RunConfig(problem=problem), resolutions)


def test_sweeps_study(fake_run):
    """Test :func:`mmdg.harness.sweeps_study`."""
    tables = sweeps_study(RunConfig(problem='burgers-smooth'), [10, 20, 80], [0, 3])
    assert list(tables) == [0, 3]
    assert [config.sweeps for config in fake_run] == [0, 0, 0, 3, 3, 3]
    assert tables[3].orders('linf')[2] == pytest.approx(2.0)


def test_compare_moving_uniform(monkeypatch):
    """Test :func:`mmdg.harness.compare_moving_uniform` with the runs replaced."""

    def run(config):
        """Return a deviation depending on whether the mesh moves."""
        deviation = 1e-3 if config.moving else 4e-3
        return types.SimpleNamespace(deviation=lambda exact: deviation)

    monkeypatch.setattr(importlib.import_module('mmdg.harness.convergence'), 'run', run)
    comparison = compare_moving_uniform(RunConfig(problem='sod', resolution=50))
    assert comparison == Comparison(50, moving=1e-3, uniform=4e-3)
    assert comparison.to_text() == 'N=50: moving 1.0000e-03, uniform 4.0000e-03'


def test_compare_moving_uniform_invalid():
    """Test that :func:`mmdg.harness.compare_moving_uniform` raises for a problem without any solution."""
    with pytest.raises(ConfigurationError, match='no solution to compare against'):
        compare_moving_uniform(RunConfig(problem='forward-step', resolution=15))
