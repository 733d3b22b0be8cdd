"""Simplicial meshes, element geometry, mesh motion and point location."""

from .export import *
from .geometry import *
from .locate import *
from .mesh import *

__all__ = (
    'VERTEX_FIXED',
    'VERTEX_INTERIOR',
    'VERTEX_SLIDING',
    'ElementGeometry',
    'Mesh',
    'MeshMotion',
    'barycentric',
    'compute_geometry',
    'generate_criss_cross',
    'generate_interval',
    'geometry_at',
    'interpolate_motion',
    'locate_point',
    'locate_points',
    'min_inradius',
    'write_vertex_table',
    'write_vtk',
)
