"""Tests for the :mod:`tests.conftest` module."""

import pytest


def test_filepath_static(filepath_static):
    """Test the ``filepath_static`` fixture."""
    assert filepath_static('config/sod.yml').is_file()


def test_filepath_static_missing(filepath_static):
    """Test the ``filepath_static`` fixture fails for a file that does not exist."""
    with pytest.raises(AssertionError):
        filepath_static('config/non-existent.yml')


@pytest.mark.slow
def test_skip_slow(run_slow):
    """Test that tests marked ``slow`` only run when requested."""
    assert run_slow
