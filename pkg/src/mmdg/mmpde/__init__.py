"""Metric computation and moving mesh PDE mesh movement."""

from .energy import *
from .metric import *
from .movement import *

__all__ = (
    'ComputationalMesh',
    'EquidistributionReport',
    'HessianPatches',
    'MeshEnergyParams',
    'MeshMover',
    'MetricField',
    'adaptation_scalar_euler',
    'compute_metric',
    'edge_matrices',
    'energy_density',
    'local_velocities',
    'mesh_energy',
    'mesh_velocities',
    'metric_from_hessian',
    'nodal_average',
    'recover_hessian',
    'smooth_metric',
    'step_mesh',
)
