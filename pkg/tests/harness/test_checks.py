"""Tests for the :mod:`mmdg.harness.checks` module."""

import pytest
from mmdg.harness import CHECKS, CheckResult, run_checks
from mmdg.harness.checks import check_conservation, check_conservation_2d, check_free_stream, check_mesh_gradient


def test_check_result():
    """Test :class:`mmdg.harness.CheckResult`."""
    passed = CheckResult('quadrature', 1e-15, 1e-13)
    failed = CheckResult('quadrature', 1e-12, 1e-13)
    assert passed.passed
    assert not failed.passed
    assert passed.to_text().endswith('ok')
    assert failed.to_text().endswith('FAILED')


def test_checks_registry():
    """Test the names of the registered checks."""
    assert set(CHECKS) == {
        'quadrature',
        'eigensystem',
        'mesh-gradient',
        'metric-scaling',
        'free-stream',
        'conservation',
        'conservation-2d',
        'limiter-means',
    }


def test_run_checks():
    """Test :func:`mmdg.harness.run_checks` for the inexpensive checks."""
    names = ['quadrature', 'eigensystem', 'metric-scaling', 'limiter-means']
    results = run_checks(names)
    assert [result.name for result in results] == ['quadrature', 'eigensystem', 'metric scaling', 'limiter means']
    assert all(result.passed for result in results), [result.to_text() for result in results]


def test_run_checks_unknown():
    """Test that :func:`mmdg.harness.run_checks` raises for an unknown name."""
    with pytest.raises(ValueError, match='unknown checks'):
        run_checks(['quadrature', 'non-existent'])


@pytest.mark.parametrize(
    ('check', 'kwargs'),
    (
        (check_mesh_gradient, {'meshes': 2}),
        (check_free_stream, {'steps': 5}),
        (check_conservation, {'steps': 3}),
        (check_conservation_2d, {'steps': 2}),
    ),
)
def test_reduced_checks(check, kwargs):
    """Test the expensive checks with a reduced number of samples or steps."""
    result = check(**kwargs)
    assert result.passed, result.to_text()
