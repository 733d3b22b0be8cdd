"""Validated run configuration and its loading from files and command line overrides."""

from __future__ import annotations

import pathlib
import typing as t

import pydantic
import yaml
from pydantic import Field

from ..exceptions import ConfigurationError
from ..problems import get_problem
from ..solver import default_cfl

if t.TYPE_CHECKING:
    from ..problems import ProblemSpec

__all__ = ('NormName', 'RunConfig', 'load_config', 'parse_key_values')

NormName = t.Literal['l1', 'l2', 'linf']


class RunConfig(pydantic.BaseModel):
    """Parameters of a single simulation.

    Physical parameters left unset take the defaults of the problem and the polynomial degree, see :meth:`resolved`.
    """

    model_config = pydantic.ConfigDict(extra='forbid', frozen=True)

    problem: str = Field(title='Problem', description='Name of the problem in the catalog.')
    degree: t.Literal[1, 2] = Field(default=1, title='Degree', description='Polynomial degree of the DG space.')
    resolution: int = Field(
        default=100, title='Resolution', description='Number of elements, or grid cells along x in 2D.', ge=1
    )
    cfl: t.Optional[float] = Field(default=None, title='CFL number', description='Time step safety factor.', gt=0)
    tau: t.Optional[float] = Field(default=None, title='Mesh time scale', description='MMPDE time scale.', gt=0)
    beta: t.Optional[float] = Field(
        default=None, title='Adaptation parameter', description='Weight of the Euler adaptation scalar.', ge=0
    )
    sweeps: int = Field(default=3, title='Smoothing sweeps', description='Low-pass filter sweeps of the metric.', ge=0)
    moving: bool = Field(default=True, title='Moving mesh', description='Whether the mesh follows the solution.')
    limiter: t.Optional[bool] = Field(default=None, title='Limiter', description='Whether troubled cells are limited.')
    t_final: t.Optional[float] = Field(default=None, title='Final time', description='End of the simulation.', gt=0)
    integrator: t.Literal['bdf', 'euler'] = Field(
        default='euler', title='Mesh integrator', description='Integrator of the mesh gradient flow.'
    )
    output: t.Optional[pathlib.Path] = Field(
        default=None, title='Output directory', description='Directory receiving the output files, none if unset.'
    )
    cadence: int = Field(
        default=0, title='Output cadence', description='Write a snapshot every this many steps, 0 for the last.', ge=0
    )
    norms: tuple[NormName, ...] = Field(
        default=('l1', 'l2', 'linf'), title='Norms', description='Error norms reported at the end of the run.'
    )
    reference_dir: pathlib.Path = Field(
        default=pathlib.Path('references'),
        title='Reference directory',
        description='Cache directory of the self-generated fine mesh reference solutions.',
    )

    @pydantic.field_validator('problem')
    @classmethod
    def validate_problem(cls, value: str) -> str:
        """Validate that the problem exists in the catalog."""
        get_problem(value)
        return value

    @property
    def spec(self) -> ProblemSpec:
        """Return the problem of the catalog."""
        return get_problem(self.problem)

    def resolved(self) -> RunConfig:
        """Return a copy with every unset parameter replaced by the default of the problem and degree."""
        spec = self.spec
        return self.model_copy(
            update={
                'cfl': default_cfl(self.degree) if self.cfl is None else self.cfl,
                'tau': spec.tau if self.tau is None else self.tau,
                'beta': spec.beta if self.beta is None else self.beta,
                'limiter': spec.limiter if self.limiter is None else self.limiter,
                't_final': spec.t_final if self.t_final is None else self.t_final,
            }
        )


def parse_key_values(text: str) -> dict[str, t.Any]:
    """Parse flat ``key = value`` lines, with values interpreted as YAML scalars.

    Blank lines and lines starting with ``#`` are ignored.

    :raises ConfigurationError: for lines without ``=``.
    """
    result: dict[str, t.Any] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith('#'):
            continue
        key, separator, value = stripped.partition('=')
        if not separator:
            raise ConfigurationError(f'line {number} is not of the form `key = value`: {line!r}')
        result[key.strip().replace('-', '_')] = yaml.safe_load(value.strip()) if value.strip() else None
    return result


def load_config(
    filepath: pathlib.Path | str | None = None, overrides: t.Mapping[str, t.Any] | None = None
) -> RunConfig:
    """Return the run configuration from a file with optional overrides.

    Files with the suffix ``.yml`` or ``.yaml`` are YAML mappings, other files contain ``key = value`` lines.

    :param filepath: the configuration file, optional when the overrides name the problem.
    :param overrides: values taking precedence over those of the file, ``None`` values are ignored.
    :raises ConfigurationError: if the file cannot be read or the configuration is invalid.
    """
    values: dict[str, t.Any] = {}

    if filepath is not None:
        filepath = pathlib.Path(filepath)
        try:
            text = filepath.read_text()
        except OSError as exception:
            raise ConfigurationError(f'failed to read configuration `{filepath}`: {exception}') from exception

        if filepath.suffix in ('.yml', '.yaml'):
            try:
                loaded = yaml.safe_load(text) or {}
            except yaml.YAMLError as exception:
                raise ConfigurationError(f'invalid YAML in `{filepath}`: {exception}') from exception
            if not isinstance(loaded, dict):
                raise ConfigurationError(f'configuration `{filepath}` is not a mapping')
            values.update({str(key).replace('-', '_'): value for key, value in loaded.items()})
        else:
            values.update(parse_key_values(text))

    values.update({key: value for key, value in (overrides or {}).items() if value is not None})

    try:
        return RunConfig(**values)
    except pydantic.ValidationError as exception:
        raise ConfigurationError(f'invalid configuration: {exception}') from exception
