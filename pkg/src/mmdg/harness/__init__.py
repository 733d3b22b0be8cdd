"""Run orchestration: configuration, the coupled time loop, error norms, refinement studies and output files."""

from .checks import *
from .config import *
from .convergence import *
from .norms import *
from .output import *
from .run import *

__all__ = (
    'CHECKS',
    'CheckResult',
    'Comparison',
    'ConvergenceRow',
    'ConvergenceTable',
    'ErrorAccumulator',
    'ErrorReport',
    'NormName',
    'OutputWriter',
    'RunConfig',
    'RunResult',
    'Simulation',
    'compare_moving_uniform',
    'component_names',
    'convergence_study',
    'error_norms',
    'load_config',
    'observed_order',
    'parse_key_values',
    'pointwise_error',
    'run',
    'run_checks',
    'sweeps_study',
    'write_solution_table',
)
