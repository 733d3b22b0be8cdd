"""Moving mesh discontinuous Galerkin solver for hyperbolic conservation laws."""

__version__ = '0.1.0'
