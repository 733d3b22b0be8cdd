"""Conservation laws: fluxes, signal speeds and characteristic decompositions."""

from .burgers import *
from .euler import *
from .law import *

__all__ = ('ADMISSIBILITY_TOLERANCE', 'Burgers', 'ConservationLaw', 'Euler', 'make_law')


def make_law(name: str, dimension: int) -> ConservationLaw:
    """Return the conservation law with the given name for a dimension.

    :raises ValueError: for unknown names.
    """
    if name == Burgers.name:
        return Burgers(dimension)
    if name == Euler.name:
        return Euler(dimension)
    raise ValueError(f'unknown conservation law `{name}`, expected one of `burgers`, `euler`')
