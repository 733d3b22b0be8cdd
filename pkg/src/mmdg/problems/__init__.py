"""Catalog of benchmark problems with their exact and reference solutions."""

from .catalog import *
from .exact import *
from .reference import *
from .riemann import *

__all__ = (
    'DEFAULT_RESOLUTION',
    'ExactRiemannSolver',
    'ExactSolution',
    'ProblemSpec',
    'ReferenceSolution',
    'catalog',
    'exact_burgers_2d',
    'exact_burgers_riemann',
    'exact_burgers_sine',
    'exact_euler_advection',
    'exact_euler_advection_2d',
    'get_problem',
    'load_reference',
    'make_reference',
    'reference_path',
    'riemann_exact_euler',
)
