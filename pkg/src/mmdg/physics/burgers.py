"""Inviscid Burgers equation ``u_t + sum_i (u^2 / 2)_{x_i} = 0``."""

from __future__ import annotations

import numpy as np

from .law import ConservationLaw

__all__ = ('Burgers',)


class Burgers(ConservationLaw):
    """Scalar Burgers equation with the same flux ``u^2 / 2`` in every direction."""

    name = 'burgers'

    @property
    def n_components(self) -> int:
        return 1

    def flux(self, u: np.ndarray) -> np.ndarray:
        half_square = 0.5 * u**2
        return np.repeat(half_square[..., None, :], self.dimension, axis=-2)

    def max_signal_speed(self, u: np.ndarray, normal: np.ndarray, mesh_speed: np.ndarray | float = 0.0) -> np.ndarray:
        return np.abs(u[..., 0] * np.sum(normal, axis=-1) - mesh_speed)
