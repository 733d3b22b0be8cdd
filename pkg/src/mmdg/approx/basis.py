"""Orthonormal polynomial bases on the reference simplex."""

from __future__ import annotations

import dataclasses
import functools
import math

import numpy as np
from scipy import linalg

__all__ = ('Basis', 'build_basis', 'mass_matrix', 'monomial_integral')


def monomial_integral(exponents: tuple[int, ...]) -> float:
    """Return the integral of ``x^a`` (1D) or ``x^a y^b`` (2D) over the reference simplex."""
    if len(exponents) == 1:
        return 1.0 / (exponents[0] + 1)
    a, b = exponents
    return math.factorial(a) * math.factorial(b) / math.factorial(a + b + 2)


def _exponents(dimension: int, degree: int) -> np.ndarray:
    """Return the monomial exponents of total degree at most ``degree``, ordered by total degree."""
    if dimension == 1:
        return np.arange(degree + 1)[:, None]
    return np.array([(total - j, j) for total in range(degree + 1) for j in range(total + 1)])


@dataclasses.dataclass(frozen=True, eq=False)
class Basis:
    """Orthonormal basis of polynomials of degree ``k`` on the reference simplex.

    The functions are linear combinations of monomials, ``phi_i = sum_j coefficients[i, j] m_j``, obtained by
    Cholesky factorization of the monomial Gram matrix. The first function is the normalized constant.
    """

    dimension: int
    degree: int
    exponents: np.ndarray
    coefficients: np.ndarray

    @property
    def size(self) -> int:
        """Return the number of basis functions ``L``."""
        return len(self.exponents)

    @property
    def reference_volume(self) -> float:
        """Return the measure of the reference simplex."""
        return 1.0 / math.factorial(self.dimension)

    @property
    def constant(self) -> float:
        """Return the value of the first basis function, so that a cell average equals ``constant * u_0``."""
        return 1.0 / math.sqrt(self.reference_volume)

    def _monomials(self, points: np.ndarray, derivative: tuple[int, ...]) -> np.ndarray:
        """Return the derivative of every monomial at the points, shape ``(q, L)``."""
        points = np.atleast_2d(points)
        result = np.ones((len(points), self.size))
        for axis, order in enumerate(derivative):
            powers = self.exponents[:, axis]
            factor = np.ones(self.size)
            for step in range(order):
                factor = factor * np.maximum(powers - step, 0)
            result = result * factor * points[:, axis : axis + 1] ** np.maximum(powers - order, 0)
        return result

    def values(self, points: np.ndarray) -> np.ndarray:
        """Return the basis values at reference points, shape ``(q, L)``."""
        return self._monomials(points, (0,) * self.dimension) @ self.coefficients.T

    def gradients(self, points: np.ndarray) -> np.ndarray:
        """Return the reference gradients of the basis at reference points, shape ``(q, L, d)``."""
        columns = []
        for axis in range(self.dimension):
            derivative = tuple(int(axis == other) for other in range(self.dimension))
            columns.append(self._monomials(points, derivative) @ self.coefficients.T)
        return np.stack(columns, axis=-1)

    def hessians(self, points: np.ndarray) -> np.ndarray:
        """Return the reference second derivatives of the basis at reference points, shape ``(q, L, d, d)``."""
        points = np.atleast_2d(points)
        result = np.empty((len(points), self.size, self.dimension, self.dimension))
        for a in range(self.dimension):
            for b in range(self.dimension):
                derivative = [0] * self.dimension
                derivative[a] += 1
                derivative[b] += 1
                result[:, :, a, b] = self._monomials(points, tuple(derivative)) @ self.coefficients.T
        return result


@functools.lru_cache(maxsize=None)
def build_basis(dimension: int, k: int) -> Basis:
    """Return the orthonormal basis of degree ``k`` on the reference simplex of the given dimension.

    :param dimension: 1 or 2.
    :param k: polynomial degree, 1 or 2.
    :raises ValueError: for unsupported dimensions or degrees.
    """
    if dimension not in (1, 2):
        raise ValueError(f'unsupported dimension {dimension}')
    if k not in (1, 2):
        raise ValueError(f'unsupported polynomial degree {k}, expected 1 or 2')

    exponents = _exponents(dimension, k)
    gram = np.array(
        [[monomial_integral(tuple(int(e) for e in (left + right))) for right in exponents] for left in exponents]
    )
    factor = linalg.cholesky(gram, lower=True)
    coefficients = linalg.solve_triangular(factor, np.eye(len(exponents)), lower=True)
    return Basis(dimension=dimension, degree=k, exponents=exponents, coefficients=coefficients)


def mass_matrix(basis: Basis, volumes: np.ndarray | float) -> np.ndarray:
    """Return the mass matrix of elements with the given volumes.

    The basis on an affine element is the reference basis composed with the inverse affine map, so the mass matrix
    is the identity scaled by ``|K| / |K_ref|``.

    :return: array of shape ``(L, L)`` for a scalar volume, ``(n, L, L)`` otherwise.
    :raises ValueError: for non-positive volumes.
    """
    volumes = np.asarray(volumes, dtype=float)
    if np.any(volumes <= 0):
        raise ValueError('mass matrix requested for degenerate elements')
    return (volumes / basis.reference_volume)[..., None, None] * np.eye(basis.size)
