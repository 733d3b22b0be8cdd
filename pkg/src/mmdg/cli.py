"""Command line interface ``mmdg``."""

from __future__ import annotations

import logging
import pathlib
import typing as t

import click

from .exceptions import ConfigurationError, NumericalError

if t.TYPE_CHECKING:
    from .harness import RunConfig

__all__ = ('cli', 'main')

VERBOSITY = {'debug': logging.DEBUG, 'info': logging.INFO, 'warning': logging.WARNING, 'error': logging.ERROR}

F = t.TypeVar('F', bound=t.Callable[..., t.Any])


def _integers(ctx: click.Context, param: click.Parameter, value: str | None) -> list[int] | None:
    """Parse a comma separated list of integers."""
    if value is None:
        return None
    try:
        return [int(item) for item in value.split(',') if item.strip()]
    except ValueError as exception:
        raise click.BadParameter(f'expected comma separated integers, got `{value}`') from exception


def run_options(command: F) -> F:
    """Add the options shared by the commands that configure simulations."""
    options = [
        click.option('--config', 'filepath', type=click.Path(exists=True, dir_okay=False, path_type=pathlib.Path)),
        click.option('--problem', help='Name of the problem in the catalog.'),
        click.option('--k', 'degree', type=click.IntRange(1, 2), help='Polynomial degree.'),
        click.option('--n', 'resolution', type=click.IntRange(min=1), help='Number of elements, or cells along x.'),
        click.option('--cfl', type=float, help='CFL number.'),
        click.option('--tau', type=float, help='Time scale of the mesh movement.'),
        click.option('--beta', type=float, help='Weight of the Euler adaptation scalar.'),
        click.option('--sweeps', type=click.IntRange(min=0), help='Smoothing sweeps of the metric.'),
        click.option('--moving/--no-moving', default=None, help='Move the mesh with the solution.'),
        click.option('--limiter/--no-limiter', default=None, help='Limit troubled cells.'),
        click.option('--tfinal', 't_final', type=float, help='Final time.'),
        click.option('--integrator', type=click.Choice(['bdf', 'euler']), help='Integrator of the mesh movement.'),
        click.option('--out', 'output', type=click.Path(file_okay=False, path_type=pathlib.Path)),
        click.option('--cadence', type=click.IntRange(min=0), help='Write a snapshot every this many steps.'),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def _load(filepath: pathlib.Path | None, **overrides: t.Any) -> RunConfig:
    from .harness import load_config

    return load_config(filepath, overrides)


@click.group()
@click.option(
    '--verbosity',
    type=click.Choice(list(VERBOSITY)),
    default='info',
    show_default=True,
    help='Level of the log messages.',
)
def cli(verbosity: str) -> None:
    """Moving mesh discontinuous Galerkin solver for hyperbolic conservation laws."""
    logging.basicConfig(level=VERBOSITY[verbosity], format='%(asctime)s %(levelname)-8s %(name)s: %(message)s')
    logging.getLogger('mmdg').setLevel(VERBOSITY[verbosity])


@cli.command('run')
@run_options
def cmd_run(filepath: pathlib.Path | None, **overrides: t.Any) -> None:
    """Run a single simulation and report its errors."""
    from .harness import run
    from .problems import load_reference, reference_path

    config = _load(filepath, **overrides)
    result = run(config)
    click.echo(f'{config.problem}: {result.steps} steps to t={result.state.time:.6e}')

    if result.errors is not None:
        for norm in config.norms:
            click.echo(
                f'{norm:>4}: space-time {result.errors.get(norm):.6e}  final {result.errors.get(norm, final=True):.6e}'
            )
        return

    resolved = result.config
    spec = resolved.spec
    if spec.exact == 'reference' and spec.dimension == 1:
        for filepath_reference in sorted(resolved.reference_dir.glob(f'{spec.name}_n*_k*.csv')):
            reference = load_reference(filepath_reference)
            click.echo(f'L1 deviation from `{filepath_reference.name}`: {result.deviation(reference):.6e}')
            break
        else:
            expected = reference_path(resolved.reference_dir, spec.name, 4000, 2)
            click.echo(f'no reference cached, create `{expected}` with `mmdg reference --problem {spec.name}`')


@cli.command('convergence')
@run_options
@click.option('--resolutions', callback=_integers, help='Comma separated resolutions, at least three.')
@click.option('--final', is_flag=True, help='Tabulate the final time norms instead of the space-time norms.')
@click.option('--sweeps-list', 'sweeps_list', callback=_integers, help='Repeat the study for these sweep counts.')
@click.option('--compare', is_flag=True, help='Compare a moving and a uniform mesh run at the resolution.')
@click.option('--csv', 'filepath_csv', type=click.Path(dir_okay=False, path_type=pathlib.Path))
def cmd_convergence(
    filepath: pathlib.Path | None,
    resolutions: list[int] | None,
    final: bool,
    sweeps_list: list[int] | None,
    compare: bool,
    filepath_csv: pathlib.Path | None,
    **overrides: t.Any,
) -> None:
    """Run a refinement study and print the error table with the observed orders."""
    from .harness import compare_moving_uniform, convergence_study, sweeps_study

    config = _load(filepath, **overrides)

    if compare:
        click.echo(compare_moving_uniform(config).to_text())
        return

    if not resolutions:
        raise ConfigurationError('the `--resolutions` option is required for a refinement study')

    if sweeps_list:
        tables = sweeps_study(config, resolutions, sweeps_list, final=final)
    else:
        tables = {config.sweeps: convergence_study(config, resolutions, final=final)}

    for sweeps, table in tables.items():
        click.echo(f'{config.problem}, k={config.degree}, sweeps={sweeps}')
        click.echo(table.to_text())
        if filepath_csv is not None:
            target = filepath_csv if len(tables) == 1 else filepath_csv.with_stem(f'{filepath_csv.stem}_s{sweeps}')
            table.write_csv(target)
            click.echo(f'table written to `{target}`')


@cli.command('reference')
@click.option('--problem', required=True, help='Name of a one dimensional problem in the catalog.')
@click.option('--n', 'resolution', type=click.IntRange(min=1), default=4000, show_default=True)
@click.option('--k', 'degree', type=click.IntRange(1, 2), default=2, show_default=True)
@click.option(
    '--cache-dir', type=click.Path(file_okay=False, path_type=pathlib.Path), default='references', show_default=True
)
@click.option('--force', is_flag=True, help='Regenerate the reference even if it is cached.')
def cmd_reference(problem: str, resolution: int, degree: int, cache_dir: pathlib.Path, force: bool) -> None:
    """Generate and cache the fine mesh reference solution of a problem."""
    from .problems import make_reference, reference_path

    reference = make_reference(problem, resolution, degree, cache_dir, force=force)
    minimum, maximum = reference.bounds
    click.echo(f'reference of `{problem}` in `{reference_path(cache_dir, problem, resolution, degree)}`')
    click.echo(f'first component in [{minimum[0]:.6e}, {maximum[0]:.6e}]')


@cli.command('check')
@click.argument('names', nargs=-1)
def cmd_check(names: tuple[str, ...]) -> int:
    """Run the property suite, or the named checks."""
    from .harness import CHECKS, run_checks

    unknown = sorted(set(names) - set(CHECKS))
    if unknown:
        raise click.BadParameter(f'unknown checks {unknown}, choose from {sorted(CHECKS)}', param_hint='NAMES')

    results = run_checks(names or None)
    for result in results:
        click.echo(result.to_text())
    return 0 if all(result.passed for result in results) else 2


def main(args: t.Sequence[str] | None = None) -> int:
    """Run the command line interface and return the exit code.

    The exit code is 0 on success, 2 if the method failed numerically and 1 for usage and configuration errors.
    """
    try:
        code = cli.main(args=list(args) if args is not None else None, prog_name='mmdg', standalone_mode=False)
    except NumericalError as exception:
        click.echo(f'Error: numerical failure: {exception}', err=True)
        return 2
    except ConfigurationError as exception:
        click.echo(f'Error: {exception}', err=True)
        return 1
    except click.ClickException as exception:
        exception.show()
        return 1
    except click.Abort:
        click.echo('Aborted!', err=True)
        return 1
    except OSError as exception:
        click.echo(f'Error: {exception}', err=True)
        return 1
    return code if isinstance(code, int) else 0

