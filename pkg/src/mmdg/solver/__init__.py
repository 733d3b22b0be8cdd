"""Moving mesh discontinuous Galerkin operator, numerical flux and time stepping."""

from .boundary import *
from .flux import *
from .operator import *
from .state import *
from .timestep import *

__all__ = (
    'BoundaryCondition',
    'DGState',
    'DirichletBoundary',
    'Discretization',
    'InitialCondition',
    'OutflowBoundary',
    'ReflectiveBoundary',
    'SplitBoundary',
    'StepControls',
    'compute_dt',
    'default_cfl',
    'evaluate_function',
    'llf_flux',
    'mesh_flux',
    'project_initial',
    'rk3_step',
    'semidiscrete_rhs',
    'stable_dt',
)
