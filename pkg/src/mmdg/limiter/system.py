"""Limiting of whole coefficient tables, component-wise or in local characteristic variables."""

from __future__ import annotations

import logging
import typing as t

import numpy as np

from ..exceptions import AdmissibilityError
from ..mesh import geometry_at
from .detect import TroubleFlags, detect_troubled, midpoint_expansion
from .reconstruct import LimiterWeights, build_stencil, limit_scalar

if t.TYPE_CHECKING:
    from ..mesh import ElementGeometry, MeshMotion
    from ..solver import Discretization

__all__ = ('Limiter', 'limit_system')

_LOGGER = logging.getLogger(__name__)


def limit_system(
    discretization: Discretization,
    coefficients: np.ndarray,
    flags: TroubleFlags,
    geometry: ElementGeometry,
    weights: LimiterWeights | None = None,
) -> np.ndarray:
    """Return a new coefficient table with the troubled cells reconstructed.

    Laws with a characteristic decomposition are limited once per face direction: the polynomials of the cell and
    its neighbors are projected with the left eigenvectors at the cell average, limited field by field and mapped
    back with the right eigenvectors. The results are averaged with the neighbor volumes as weights. Other laws are
    limited component by component.

    :param discretization: the discretization.
    :param coefficients: the coefficient table, not modified.
    :param flags: the troubled cells.
    :param geometry: the geometry at the time of the coefficients.
    :param weights: linear weights, the defaults of the dimension if not specified.
    """
    law = discretization.law
    basis = discretization.basis
    values = discretization.element_values
    weights = LimiterWeights.for_dimension(basis.dimension) if weights is None else weights
    result = np.array(coefficients, copy=True)

    for element in flags.elements:
        stencil = build_stencil(discretization, geometry, int(element))
        own = coefficients[element]
        neighbors = coefficients[np.maximum(stencil.neighbors, 0)]

        if not law.has_characteristics:
            for component in range(own.shape[1]):
                result[element, :, component] = limit_scalar(
                    stencil, own[:, component], neighbors[:, :, component], values, weights
                )
            continue

        average = basis.constant * own[0]
        directions = np.nonzero(stencil.neighbors >= 0)[0]
        combined = np.zeros_like(own)
        try:
            for face in directions:
                left, right, _ = law.eigensystem(average, geometry.normals[element, face])
                projected_own = own @ left.T
                projected = neighbors @ left.T
                limited = np.empty_like(projected_own)
                for field in range(own.shape[1]):
                    limited[:, field] = limit_scalar(
                        stencil, projected_own[:, field], projected[:, :, field], values, weights
                    )
                combined += stencil.volumes[face] * (limited @ right.T)
        except AdmissibilityError:
            _LOGGER.warning('inadmissible cell average on element %d, left unlimited', element)
            continue

        result[element] = combined / stencil.volumes[directions].sum()
        result[element, 0] = own[0]

    return result


class Limiter:
    """Troubled cell detection followed by reconstruction, applied to Runge-Kutta stage results."""

    def __init__(self, discretization: Discretization, weights: LimiterWeights | None = None):
        """Construct the limiter.

        :param discretization: the discretization.
        :param weights: linear weights, the defaults of the dimension if not specified.
        """
        self.discretization = discretization
        self.weights = LimiterWeights.for_dimension(discretization.mesh.dimension) if weights is None else weights
        self.last_flags: TroubleFlags | None = None

    def apply(self, coefficients: np.ndarray, geometry: ElementGeometry) -> tuple[np.ndarray, TroubleFlags]:
        """Return the limited coefficients and the flags for a geometry."""
        expansion = midpoint_expansion(self.discretization, geometry)
        flags = detect_troubled(self.discretization, coefficients, geometry, expansion)
        self.last_flags = flags
        if not flags.count:
            return coefficients, flags
        return limit_system(self.discretization, coefficients, flags, geometry, self.weights), flags

    def hook(self, motion: MeshMotion) -> t.Callable[[np.ndarray, float], np.ndarray]:
        """Return a stage hook limiting coefficients at the geometry of the motion at the given time."""

        def limit(coefficients: np.ndarray, time: float) -> np.ndarray:
            geometry, _ = geometry_at(self.discretization.mesh, motion, time)
            limited, _ = self.apply(coefficients, geometry)
            return limited

        return limit
