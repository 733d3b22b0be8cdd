"""TVB minmod identification of troubled cells."""

from __future__ import annotations

import dataclasses
import typing as t

import numpy as np

if t.TYPE_CHECKING:
    from ..mesh import ElementGeometry
    from ..solver import Discretization

__all__ = (
    'REASON_EXPANSION',
    'REASON_MINMOD',
    'REASON_NONE',
    'TVB_FACTOR',
    'MidpointExpansion',
    'TroubleFlags',
    'detect_troubled',
    'midpoint_expansion',
    'minmod',
    'minmod_tvb',
    'tvb_threshold',
)

REASON_NONE = 0
REASON_MINMOD = 1
REASON_EXPANSION = 2

TVB_FACTOR = 1.5
CONDITION_LIMIT = 1e12
EXPANSION_TOLERANCE = 1e-12


@dataclasses.dataclass(frozen=True, eq=False)
class MidpointExpansion:
    """Expansion of every face midpoint in the barycenters of the element and two of its neighbors.

    ``x_m - x_b0 = alpha_1 (x_b1 - x_b0) + alpha_2 (x_bl - x_b0)`` where ``x_b1`` is the barycenter of the neighbor
    across the face and ``x_bl`` that of the neighbor across the face recorded in :attr:`partners`.
    """

    coefficients: np.ndarray
    """Nonnegative ``(alpha_1, alpha_2)`` per face, shape ``(n, d + 1, 2)``; ``alpha_2`` is zero in 1D."""

    partners: np.ndarray
    """Local face index of the second neighbor, shape ``(n, d + 1)``, ``-1`` where absent."""

    valid: np.ndarray
    """Whether nonnegative coefficients exist, shape ``(n, d + 1)``."""


@dataclasses.dataclass(frozen=True, eq=False)
class TroubleFlags:
    """Result of a troubled cell identification pass."""

    troubled: np.ndarray
    """Boolean flag per element."""

    reasons: np.ndarray
    """Per element: :data:`REASON_NONE`, :data:`REASON_MINMOD` or :data:`REASON_EXPANSION`."""

    @property
    def count(self) -> int:
        """Return the number of troubled cells."""
        return int(self.troubled.sum())

    @property
    def elements(self) -> np.ndarray:
        """Return the indices of the troubled cells."""
        return np.nonzero(self.troubled)[0]


def neighbor_barycenters(discretization: Discretization, geometry: ElementGeometry) -> np.ndarray:
    """Return the barycenter of the neighbor across every face, shifted across periodic faces, ``nan`` if absent."""
    mesh = discretization.mesh
    neighbors = mesh.neighbors
    result = geometry.barycenters[np.maximum(neighbors, 0)] + mesh.face_shifts
    result[neighbors < 0] = np.nan
    return result


def midpoint_expansion(discretization: Discretization, geometry: ElementGeometry) -> MidpointExpansion:
    """Solve the barycenter expansion of every face midpoint.

    In 1D the single coefficient is the relative position of the midpoint between the two barycenters. In 2D each face
    tries the other two neighbors in turn and keeps the first yielding nonnegative coefficients from a well conditioned
    system.
    """
    mesh = discretization.mesh
    n, n_faces = mesh.neighbors.shape
    centers = geometry.barycenters
    others = neighbor_barycenters(discretization, geometry) - centers[:, None, :]
    midpoints = geometry.vertices[:, mesh.face_local_vertices, :].mean(axis=2) - centers[:, None, :]

    coefficients = np.zeros((n, n_faces, 2))
    partners = np.full((n, n_faces), -1, dtype=np.int64)
    valid = np.zeros((n, n_faces), dtype=bool)

    if mesh.dimension == 1:
        present = mesh.neighbors >= 0
        alpha = np.where(present, midpoints[..., 0] / np.where(present, others[..., 0], 1.0), 0.0)
        coefficients[..., 0] = alpha
        valid[...] = present & (alpha >= -EXPANSION_TOLERANCE)
        return MidpointExpansion(coefficients=coefficients, partners=partners, valid=valid)

    for face in range(n_faces):
        for partner in ((face + 1) % 3, (face + 2) % 3):
            pending = ~valid[:, face]
            present = pending & (mesh.neighbors[:, face] >= 0) & (mesh.neighbors[:, partner] >= 0)
            if not present.any():
                continue
            matrices = np.stack((others[present, face], others[present, partner]), axis=-1)
            conditioned = np.linalg.cond(matrices) < CONDITION_LIMIT
            solution = np.zeros((len(matrices), 2))
            if conditioned.any():
                solution[conditioned] = np.linalg.solve(
                    matrices[conditioned], midpoints[present, face][conditioned][..., None]
                )[..., 0]
            accepted = conditioned & np.all(solution >= -EXPANSION_TOLERANCE, axis=1)
            rows = np.nonzero(present)[0][accepted]
            coefficients[rows, face] = solution[accepted]
            partners[rows, face] = partner
            valid[rows, face] = True

    return MidpointExpansion(coefficients=coefficients, partners=partners, valid=valid)


def minmod(a1: np.ndarray | float, a2: np.ndarray | float) -> np.ndarray:
    """Return ``sign(a1) min(|a1|, |a2|)`` where the signs agree and zero elsewhere."""
    a1 = np.asarray(a1, dtype=float)
    a2 = np.asarray(a2, dtype=float)
    agree = np.sign(a1) == np.sign(a2)
    return np.where(agree, np.sign(a1) * np.minimum(np.abs(a1), np.abs(a2)), 0.0)


def minmod_tvb(a1: np.ndarray | float, a2: np.ndarray | float, threshold: float) -> np.ndarray:
    """Return ``a1`` where ``|a1| <= threshold``, the minmod of ``a1`` and ``a2`` elsewhere."""
    a1 = np.asarray(a1, dtype=float)
    return np.where(np.abs(a1) <= threshold, a1, minmod(a1, a2))


def tvb_threshold(geometry: ElementGeometry) -> float:
    """Return the TVB threshold ``(2 max_j R_j)^2``."""
    return float((2.0 * geometry.inradii.max()) ** 2)


def detect_troubled(
    discretization: Discretization,
    coefficients: np.ndarray,
    geometry: ElementGeometry,
    expansion: MidpointExpansion | None = None,
) -> TroubleFlags:
    """Flag the cells whose face midpoint deviations are modified by the TVB minmod function.

    Every conserved component is tested; a cell is troubled if any component is modified on any face, or if a face has
    no nonnegative barycenter expansion, which includes faces without a neighbor.

    :param discretization: the discretization.
    :param coefficients: the coefficient table.
    :param geometry: the geometry at the time of the coefficients.
    :param expansion: a precomputed midpoint expansion for that geometry.
    """
    mesh = discretization.mesh
    basis = discretization.basis
    expansion = midpoint_expansion(discretization, geometry) if expansion is None else expansion

    averages = basis.constant * coefficients[:, 0, :]
    midpoints = discretization.face_reference.mean(axis=1)
    values = np.einsum('fl,nlm->nfm', basis.values(midpoints), coefficients)
    deviation = values - averages[:, None, :]

    neighbor_jump = averages[np.maximum(mesh.neighbors, 0)] - averages[:, None, :]
    partner_faces = np.maximum(expansion.partners, 0)
    partner_jump = np.take_along_axis(neighbor_jump, partner_faces[..., None], axis=1)
    difference = expansion.coefficients[..., :1] * neighbor_jump + expansion.coefficients[..., 1:] * partner_jump

    modified = minmod_tvb(deviation, TVB_FACTOR * difference, tvb_threshold(geometry))
    changed = np.any(modified != deviation, axis=2) & expansion.valid

    missing = ~expansion.valid.all(axis=1)
    by_minmod = changed.any(axis=1)

    reasons = np.full(mesh.n_elements, REASON_NONE, dtype=np.int8)
    reasons[by_minmod] = REASON_MINMOD
    reasons[missing] = REASON_EXPANSION
    return TroubleFlags(troubled=missing | by_minmod, reasons=reasons)
