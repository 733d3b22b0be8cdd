"""Exceptions raised by the :mod:`mmdg` package."""

from __future__ import annotations

import typing as t

__all__ = (
    'AdmissibilityError',
    'ConfigurationError',
    'ConvergenceError',
    'MeshTanglingError',
    'MmdgError',
    'NumericalError',
    'VacuumError',
)


class MmdgError(Exception):
    """Base class for all exceptions of this package."""


class ConfigurationError(MmdgError, ValueError):
    """Raised when a run configuration or problem definition is invalid."""


class NumericalError(MmdgError):
    """Base class for failures of the numerical method itself."""


class _LocatedError(NumericalError):
    """Numerical failure attached to a set of elements at a given time."""

    def __init__(self, message: str, elements: t.Sequence[int] = (), time: float | None = None):
        self.elements = tuple(int(element) for element in elements)
        self.time = time

        details = []
        if self.elements:
            shown = ', '.join(str(element) for element in self.elements[:10])
            suffix = ', ...' if len(self.elements) > 10 else ''
            details.append(f'elements [{shown}{suffix}]')
        if time is not None:
            details.append(f't={time:.6e}')

        super().__init__(f'{message} ({"; ".join(details)})' if details else message)


class MeshTanglingError(_LocatedError):
    """Raised when an element attains a non-positive volume."""


class AdmissibilityError(_LocatedError):
    """Raised when a state has non-positive density or pressure."""


class ConvergenceError(NumericalError):
    """Raised when an iterative solver does not converge."""


class VacuumError(NumericalError):
    """Raised when the exact Riemann solver encounters vacuum generation."""
