"""Reference element bases and quadrature rules."""

from .basis import *
from .quadrature import *

__all__ = (
    'Basis',
    'QuadratureRule',
    'build_basis',
    'edge_quadrature',
    'element_quadrature',
    'face_points',
    'gauss_legendre',
    'mass_matrix',
    'monomial_integral',
    'simplex_quadrature',
)
