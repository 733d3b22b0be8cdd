"""Reconstruction of troubled cell polynomials from modified neighbor polynomials.

All candidate polynomials are expressed in the basis of the target cell ``K``. In that basis the mean constraint on
``K`` fixes the constant mode, so the equality constrained least squares problem reduces to an unconstrained one in the
remaining modes.
"""

from __future__ import annotations

import dataclasses
import logging
import math
import typing as t

import numpy as np
from scipy import linalg

if t.TYPE_CHECKING:
    from ..mesh import ElementGeometry
    from ..solver import Discretization

__all__ = (
    'LimiterWeights',
    'ReconstructionStencil',
    'build_stencil',
    'constrained_fit',
    'limit_scalar',
    'smoothness_indicator',
    'smoothness_matrix',
)

_LOGGER = logging.getLogger(__name__)

CONDITION_LIMIT = 1e12


@dataclasses.dataclass(frozen=True)
class LimiterWeights:
    """Linear weights of the target cell and its neighbors and the regularization of the nonlinear weights."""

    linear: tuple[float, ...]
    epsilon: float = 1e-6

    @classmethod
    def for_dimension(cls, dimension: int) -> LimiterWeights:
        """Return the default weights: ``(0.998, 0.001, 0.001)`` in 1D and ``(0.997, 0.001, 0.001, 0.001)`` in 2D."""
        if dimension == 1:
            return cls(linear=(0.998, 0.001, 0.001))
        return cls(linear=(0.997, 0.001, 0.001, 0.001))

    def nonlinear(self, indicators: np.ndarray, present: np.ndarray | None = None) -> np.ndarray:
        """Return the normalized nonlinear weights ``gamma_l / (epsilon + beta_l)^2``.

        :param indicators: smoothness indicators of the target cell followed by the neighbors.
        :param present: mask of the candidates taking part, absent neighbors receive zero weight.
        """
        linear = np.array(self.linear[: len(indicators)])
        if present is not None:
            linear = np.where(present, linear, 0.0)
        raw = linear / (self.epsilon + np.asarray(indicators)) ** 2
        return raw / raw.sum()


def smoothness_matrix(discretization: Discretization, inverse: np.ndarray, volume: float) -> np.ndarray:
    """Return the matrix ``S`` with ``beta = c^T S c`` for polynomials with coefficients ``c`` in the basis of a cell.

    ``beta = sum_{1 <= |s| <= k} |K|^(|s| - 1) int_K (D^s p / |s|!)^2`` where each multi-index ``s`` is counted once.

    :param discretization: the discretization providing the basis and the element rule.
    :param inverse: inverse Jacobian of the affine map of the cell.
    :param volume: volume of the cell.
    """
    basis = discretization.basis
    rule = discretization.element_rule
    scale = volume / basis.reference_volume
    dimension = basis.dimension

    gradients = np.einsum('kd,qlk->qld', inverse, basis.gradients(rule.points))
    result = np.einsum('q,qld,qjd->lj', rule.weights, gradients, gradients) * scale

    if basis.degree >= 2:
        hessians = np.einsum('ka,qlkj,jb->qlab', inverse, basis.hessians(rule.points), inverse)
        pairs = [(a, b) for a in range(dimension) for b in range(a, dimension)]
        second = sum(
            np.einsum('q,ql,qj->lj', rule.weights, hessians[:, :, a, b], hessians[:, :, a, b]) for a, b in pairs
        )
        result = result + volume * scale * second / math.factorial(2) ** 2

    return result


def smoothness_indicator(coefficients: np.ndarray, matrix: np.ndarray) -> float:
    """Return the smoothness indicator ``c^T S c`` of a polynomial on its target cell."""
    return float(coefficients @ matrix @ coefficients)


@dataclasses.dataclass(frozen=True, eq=False)
class ReconstructionStencil:
    """Geometric data of a troubled cell and its neighbors, independent of the solution."""

    element: int
    neighbors: np.ndarray
    """Neighbor element per local face, ``-1`` where absent."""

    volumes: np.ndarray
    """Volumes of the neighbors, zero where absent."""

    extrapolation: np.ndarray
    """Basis of the target cell evaluated at the quadrature points of each neighbor, shape ``(d + 1, q, L)``."""

    weights: np.ndarray
    """Physical quadrature weights of each neighbor, shape ``(d + 1, q)``."""

    grams: np.ndarray
    """Gram matrices of the target basis in the quadrature of each neighbor, shape ``(d + 1, L, L)``."""

    rows: np.ndarray
    """Integrals of the target basis over each neighbor, shape ``(d + 1, L)``."""

    smoothness: np.ndarray
    """The smoothness matrix of the target cell."""

    mean_mode: float
    """Constant mode coefficient per unit cell average in the target basis."""


def build_stencil(discretization: Discretization, geometry: ElementGeometry, element: int) -> ReconstructionStencil:
    """Return the reconstruction stencil of an element for a geometry."""
    mesh = discretization.mesh
    basis = discretization.basis
    rule = discretization.element_rule
    neighbors = mesh.neighbors[element]

    safe = np.maximum(neighbors, 0)
    shifts = mesh.face_shifts[element]
    vertices = geometry.vertices[safe] + shifts[:, None, :]
    physical = vertices[:, None, 0, :] + np.einsum('fij,qj->fqi', geometry.jacobians[safe], rule.points)
    local = np.einsum('ij,fqj->fqi', geometry.inverses[element], physical - geometry.vertices[element, 0])
    extrapolation = basis.values(local.reshape(-1, basis.dimension)).reshape(len(neighbors), len(rule), basis.size)

    volumes = np.where(neighbors >= 0, geometry.volumes[safe], 0.0)
    weights = rule.weights[None, :] * (volumes / basis.reference_volume)[:, None]

    return ReconstructionStencil(
        element=element,
        neighbors=neighbors,
        volumes=volumes,
        extrapolation=extrapolation,
        weights=weights,
        grams=np.einsum('fql,fq,fqm->flm', extrapolation, weights, extrapolation),
        rows=np.einsum('fq,fql->fl', weights, extrapolation),
        smoothness=smoothness_matrix(discretization, geometry.inverses[element], float(geometry.volumes[element])),
        mean_mode=1.0 / basis.constant,
    )


def constrained_fit(
    gram: np.ndarray, target: np.ndarray, constraints: t.Sequence[tuple[np.ndarray, float]], mean_mode: float
) -> np.ndarray | None:
    """Minimize ``c^T G c - 2 r.c + sum (g.c - t)^2`` subject to ``c_0 = mean_mode``.

    :param gram: the matrix ``G`` of the quadratic least squares term.
    :param target: the vector ``r`` of the least squares term.
    :param constraints: pairs ``(g, t)`` of the mean matching terms.
    :param mean_mode: the prescribed constant mode.
    :return: the minimizer, or ``None`` if the reduced system is singular.
    """
    matrix = np.array(gram, dtype=float)
    vector = np.array(target, dtype=float)
    for row, value in constraints:
        matrix += np.outer(row, row)
        vector += row * value

    reduced = matrix[1:, 1:]
    rhs = vector[1:] - matrix[1:, 0] * mean_mode
    if np.linalg.cond(reduced) > CONDITION_LIMIT:
        return None
    try:
        solution = linalg.solve(reduced, rhs, assume_a='sym')
    except linalg.LinAlgError:
        return None
    return np.concatenate(([mean_mode], solution))


def limit_scalar(
    stencil: ReconstructionStencil,
    own: np.ndarray,
    neighbors: np.ndarray,
    element_values: np.ndarray,
    weights: LimiterWeights,
) -> np.ndarray:
    """Return the reconstructed polynomial of a troubled cell for one scalar field.

    :param stencil: the reconstruction stencil of the cell.
    :param own: coefficients of the cell polynomial ``p_0``, shape ``(L,)``.
    :param neighbors: coefficients of the neighbor polynomials in their own bases, shape ``(d + 1, L)``.
    :param element_values: reference basis values at the element quadrature points, shape ``(q, L)``.
    :param weights: linear weights and regularization.
    :return: coefficients in the basis of the cell, with the cell average of ``p_0``.
    """
    present = stencil.neighbors >= 0
    constant = 1.0 / stencil.mean_mode
    mean_mode = float(own[0])
    averages = constant * neighbors[:, 0]
    deviations = np.abs(averages - constant * own[0])
    values = neighbors @ element_values.T

    candidates = [own]
    for face in np.nonzero(present)[0]:
        target = stencil.extrapolation[face].T @ (stencil.weights[face] * values[face])

        others = [other for other in np.nonzero(present)[0] if other != face]
        largest = max((deviations[other] for other in others), default=0.0)
        constraints = []
        for other in others:
            if deviations[other] < largest:
                constraints.append((stencil.rows[other], float(stencil.volumes[other] * averages[other])))

        fitted = constrained_fit(stencil.grams[face], target, constraints, mean_mode)
        if fitted is None:
            _LOGGER.warning('singular constrained fit on element %d, using the cell average', stencil.element)
            fitted = np.zeros_like(own)
            fitted[0] = mean_mode
        candidates.append(fitted)

    indicators = np.array([smoothness_indicator(candidate, stencil.smoothness) for candidate in candidates])
    mask = np.concatenate(([True], present))
    full = np.zeros(len(mask))
    full[mask] = indicators
    omega = weights.nonlinear(full, mask)
    return np.tensordot(omega[mask], np.array(candidates), axes=(0, 0))
