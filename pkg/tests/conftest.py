"""Test fixtures for the :mod:`mmdg` package."""

from __future__ import annotations

import os
import pathlib
import typing as t

import numpy as np
import pytest

from mmdg.mesh import Mesh, generate_criss_cross, generate_interval

STATIC = pathlib.Path(__file__).parent / 'static'


@pytest.fixture(scope='session')
def run_slow() -> bool:
    """Return whether the slow acceptance tests should run this session.

    Returns the boolean equivalent of the ``MMDG_RUN_SLOW`` environment variable. If it is not defined, ``False`` is
    returned by default.

    :return: Boolean as to whether tests marked ``slow`` are executed.
    """
    default = 'False'
    return os.getenv('MMDG_RUN_SLOW', default) != default


@pytest.fixture(autouse=True)
def skip_slow(request, run_slow) -> None:
    """Skip tests marked ``slow`` unless the ``MMDG_RUN_SLOW`` environment variable enables them."""
    if request.node.get_closest_marker('slow') is not None and not run_slow:
        pytest.skip('slow test, set `MMDG_RUN_SLOW=True` to run it')


@pytest.fixture(scope='session')
def filepath_static() -> t.Callable[[str], pathlib.Path]:
    """Return a function that returns the path of a file in the ``tests/static`` directory."""

    def factory(relative: str) -> pathlib.Path:
        filepath = STATIC / relative
        assert filepath.exists(), f'static file `{filepath}` does not exist'
        return filepath

    return factory


@pytest.fixture(scope='function')
def interval() -> Mesh:
    """Return a uniform mesh of 10 elements on ``[0, 1]`` with two boundary points."""
    return generate_interval(10, 0.0, 1.0)


@pytest.fixture(scope='function')
def periodic_interval() -> Mesh:
    """Return a uniform periodic mesh of 16 elements on ``[0, 2]``."""
    return generate_interval(16, 0.0, 2.0, periodic=True)


@pytest.fixture(scope='function')
def criss_cross() -> Mesh:
    """Return a criss-cross mesh of 3 by 2 grid cells on the unit square."""
    return generate_criss_cross(3, 2)


@pytest.fixture(scope='function')
def periodic_criss_cross() -> Mesh:
    """Return a periodic criss-cross mesh of 4 by 4 grid cells on ``[0, 2]^2``."""
    return generate_criss_cross(4, 4, ((0.0, 2.0), (0.0, 2.0)), periodic=True)


@pytest.fixture(scope='function')
def generator() -> np.random.Generator:
    """Return a seeded random number generator."""
    return np.random.default_rng(1234)
