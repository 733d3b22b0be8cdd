"""Local Lax-Friedrichs numerical flux with mesh velocity correction."""

from __future__ import annotations

import typing as t

import numpy as np

if t.TYPE_CHECKING:
    from ..physics import ConservationLaw

__all__ = ('llf_flux', 'mesh_flux')


def mesh_flux(law: ConservationLaw, u: np.ndarray, normal: np.ndarray, mesh_speed: np.ndarray | float) -> np.ndarray:
    """Return ``H(u) = (F(u) - u X') . n = F(u) . n - u s`` with ``s`` the normal mesh speed."""
    return law.normal_flux(u, normal) - u * np.asarray(mesh_speed)[..., None]


def llf_flux(
    law: ConservationLaw,
    interior: np.ndarray,
    exterior: np.ndarray,
    normal: np.ndarray,
    mesh_speed: np.ndarray | float,
    viscosity: np.ndarray | float,
) -> np.ndarray:
    """Return the local Lax-Friedrichs flux ``(H(a) + H(b) - alpha (b - a)) / 2``.

    :param law: the conservation law.
    :param interior: interior traces ``a`` of shape ``(..., m)``.
    :param exterior: exterior traces ``b`` of shape ``(..., m)``.
    :param normal: outward unit normals of shape ``(..., d)``.
    :param mesh_speed: normal mesh speed ``s``.
    :param viscosity: the numerical viscosity ``alpha``.
    """
    flux_sum = mesh_flux(law, interior, normal, mesh_speed) + mesh_flux(law, exterior, normal, mesh_speed)
    return 0.5 * (flux_sum - np.asarray(viscosity)[..., None] * (exterior - interior))
