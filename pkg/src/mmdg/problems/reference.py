"""Fine mesh reference solutions generated by the solver itself and cached on disk."""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import io
import logging
import pathlib
import typing as t

import numpy as np

from ..exceptions import ConfigurationError
from .catalog import get_problem

__all__ = ('DEFAULT_RESOLUTION', 'ReferenceSolution', 'load_reference', 'make_reference', 'reference_path')

_LOGGER = logging.getLogger(__name__)

DEFAULT_RESOLUTION = 4000
"""Number of elements of a reference run."""

_HEADER_KEYS = ('problem', 'resolution', 'degree', 'sha256')


@dataclasses.dataclass(frozen=True, eq=False)
class ReferenceSolution:
    """Cell center samples of a one dimensional reference run at its final time."""

    problem: str
    resolution: int
    degree: int
    x: np.ndarray
    """Sample positions, increasing, shape ``(N,)``."""

    values: np.ndarray
    """Conserved variables at the sample positions, shape ``(N, m)``."""

    def __call__(self, points: np.ndarray, time: float | None = None) -> np.ndarray:
        """Return the piecewise linear interpolant of the samples at points with a trailing coordinate axis.

        The time is ignored: the reference is only available at the final time of its problem.
        """
        x = np.asarray(points)[..., 0]
        columns = [np.interp(x, self.x, self.values[:, index]) for index in range(self.values.shape[1])]
        return np.stack(columns, axis=-1)

    @property
    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Return the componentwise minimum and maximum of the samples."""
        return self.values.min(axis=0), self.values.max(axis=0)


def reference_path(cache_dir: pathlib.Path, problem: str, resolution: int, degree: int) -> pathlib.Path:
    """Return the path of the cache file of a reference."""
    return cache_dir / f'{problem}_n{resolution}_k{degree}.csv'


def _body(x: np.ndarray, values: np.ndarray, names: t.Sequence[str]) -> str:
    stream = io.StringIO()
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(['x', *names])
    for position, row in zip(x, values):
        writer.writerow([f'{value:.17g}' for value in (position, *row)])
    return stream.getvalue()


def _write(filepath: pathlib.Path, reference: ReferenceSolution, names: t.Sequence[str]) -> None:
    body = _body(reference.x, reference.values, names)
    header = {
        'problem': reference.problem,
        'resolution': reference.resolution,
        'degree': reference.degree,
        'sha256': hashlib.sha256(body.encode()).hexdigest(),
    }
    try:
        filepath.parent.mkdir(parents=True, exist_ok=True)
        filepath.write_text(''.join(f'# {key}: {value}\n' for key, value in header.items()) + body)
    except OSError as exception:
        raise OSError(f'failed to write reference `{filepath}`: {exception}') from exception


def load_reference(filepath: pathlib.Path) -> ReferenceSolution:
    """Load a cached reference and verify its content hash.

    :raises ConfigurationError: if the file is malformed or its content does not match the recorded hash.
    :raises OSError: if the file cannot be read.
    """
    try:
        text = filepath.read_text()
    except OSError as exception:
        raise OSError(f'failed to read reference `{filepath}`: {exception}') from exception

    header: dict[str, str] = {}
    lines = text.splitlines(keepends=True)
    while lines and lines[0].startswith('#'):
        key, _, value = lines.pop(0)[1:].partition(':')
        header[key.strip()] = value.strip()

    missing = [key for key in _HEADER_KEYS if key not in header]
    if missing:
        raise ConfigurationError(f'reference `{filepath}` lacks the header entries {missing}')

    body = ''.join(lines)
    if hashlib.sha256(body.encode()).hexdigest() != header['sha256']:
        raise ConfigurationError(f'content of reference `{filepath}` does not match its recorded hash')

    rows = list(csv.reader(io.StringIO(body)))
    try:
        table = np.array([[float(value) for value in row] for row in rows[1:]])
    except ValueError as exception:
        raise ConfigurationError(f'reference `{filepath}` contains non-numeric data: {exception}') from exception

    return ReferenceSolution(
        problem=header['problem'],
        resolution=int(header['resolution']),
        degree=int(header['degree']),
        x=table[:, 0],
        values=table[:, 1:],
    )


def make_reference(
    problem: str,
    resolution: int = DEFAULT_RESOLUTION,
    degree: int = 2,
    cache_dir: pathlib.Path | str = 'references',
    *,
    force: bool = False,
) -> ReferenceSolution:
    """Return the reference solution of a problem, running the solver on a fixed uniform mesh if not cached.

    :param problem: name of a one dimensional problem of the catalog.
    :param resolution: number of elements of the reference mesh.
    :param degree: polynomial degree of the reference run.
    :param cache_dir: directory of the cached references.
    :param force: regenerate even if a cached reference exists.
    :raises ConfigurationError: if the problem is not one dimensional.
    :raises NumericalError: if the reference run fails.
    """
    from ..harness.config import RunConfig
    from ..harness.run import component_names, run

    spec = get_problem(problem)
    if spec.dimension != 1:
        raise ConfigurationError(f'references are only generated for one dimensional problems, not `{problem}`')

    filepath = reference_path(pathlib.Path(cache_dir), problem, resolution, degree)
    if filepath.exists() and not force:
        reference = load_reference(filepath)
        _LOGGER.info('loaded reference of `%s` from `%s`', problem, filepath)
        return reference

    _LOGGER.info('generating reference of `%s` with N=%d, k=%d', problem, resolution, degree)
    config = RunConfig.model_validate({'problem': problem, 'degree': degree, 'resolution': resolution, 'moving': False})
    result = run(config)
    centers = result.coordinates[result.mesh.cells].mean(axis=1)[:, 0]
    order = np.argsort(centers, kind='stable')
    centers = centers[order]
    samples = result.state.evaluate(np.full((1, 1), 0.5))[order, 0, :]

    reference = ReferenceSolution(problem=problem, resolution=resolution, degree=degree, x=centers, values=samples)
    _write(filepath, reference, component_names(spec.law, 1))
    _LOGGER.info('reference of `%s` written to `%s`', problem, filepath)
    return reference
