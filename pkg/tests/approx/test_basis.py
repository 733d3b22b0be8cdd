"""Tests for the :mod:`mmdg.approx.basis` module."""

import math

import numpy as np
import pytest
from mmdg.approx import build_basis, mass_matrix, monomial_integral, simplex_quadrature
from mmdg.mesh import compute_geometry


@pytest.mark.parametrize('dimension', (1, 2))
@pytest.mark.parametrize('k', (1, 2))
def test_orthonormal(dimension, k):
    """Test that the basis is orthonormal on the reference simplex."""
    basis = build_basis(dimension, k)
    rule = simplex_quadrature(dimension, 2 * k)
    values = basis.values(rule.points)
    gram = np.einsum('q,qi,qj->ij', rule.weights, values, values)
    assert basis.size == math.comb(k + dimension, dimension)
    assert np.allclose(gram, np.eye(basis.size), atol=1e-13)


@pytest.mark.parametrize('dimension', (1, 2))
def test_constant(dimension):
    """Test that the first basis function is the normalized constant."""
    basis = build_basis(dimension, 2)
    rule = simplex_quadrature(dimension, 4)
    assert np.allclose(basis.values(rule.points)[:, 0], basis.constant)
    assert basis.constant == pytest.approx(1 / math.sqrt(basis.reference_volume))
    assert np.allclose(basis.gradients(rule.points)[:, 0], 0.0)


def test_gradients(generator):
    """Test :meth:`mmdg.approx.Basis.gradients` against central differences."""
    basis = build_basis(2, 2)
    points = generator.uniform(0.1, 0.4, (4, 2))
    step = 1e-6
    for axis in range(2):
        shift = np.zeros(2)
        shift[axis] = step
        difference = (basis.values(points + shift) - basis.values(points - shift)) / (2 * step)
        assert np.allclose(basis.gradients(points)[..., axis], difference, atol=1e-7)


def test_hessians():
    """Test :meth:`mmdg.approx.Basis.hessians` is constant and symmetric for quadratics and zero for linears."""
    quadratic = build_basis(2, 2)
    hessians = quadratic.hessians(np.array([[0.2, 0.3], [0.6, 0.1]]))
    assert np.allclose(hessians[0], hessians[1])
    assert np.allclose(hessians, np.swapaxes(hessians, -1, -2))
    assert np.allclose(hessians[:, :3], 0.0)
    assert np.allclose(build_basis(1, 1).hessians(np.array([[0.5]])), 0.0)


@pytest.mark.parametrize(('dimension', 'k'), ((3, 1), (1, 0), (2, 3)))
def test_build_basis_invalid(dimension, k):
    """Test :func:`mmdg.approx.build_basis` raises for unsupported arguments."""
    with pytest.raises(ValueError, match='unsupported'):
        build_basis(dimension, k)


def test_monomial_integral():
    """Test :func:`mmdg.approx.monomial_integral`."""
    assert monomial_integral((0,)) == pytest.approx(1.0)
    assert monomial_integral((2,)) == pytest.approx(1 / 3)
    assert monomial_integral((0, 0)) == pytest.approx(0.5)
    assert monomial_integral((1, 1)) == pytest.approx(1 / 24)


def test_mass_matrix():
    """Test :func:`mmdg.approx.mass_matrix` is the identity scaled by the volume ratio."""
    basis = build_basis(2, 1)
    assert np.allclose(mass_matrix(basis, 0.25), 0.5 * np.eye(3))
    assert mass_matrix(basis, np.array([0.5, 1.0])).shape == (2, 3, 3)
    with pytest.raises(ValueError, match='degenerate'):
        mass_matrix(basis, np.array([0.5, 0.0]))


@pytest.mark.parametrize('k', (1, 2))
def test_transport_identity(k):
    """Test ``d phi / dt = -grad phi . x'`` at a fixed point of a linearly moving triangle.

    The mesh velocity ``x'`` at the point is the barycentric interpolation of the vertex velocities.
    """
    basis = build_basis(2, k)
    start = np.array([[0.1, 0.2], [1.0, 0.1], [0.3, 0.9]])
    velocity = np.array([[0.2, -0.1], [-0.3, 0.4], [0.1, 0.2]])
    point = np.array([0.45, 0.4])

    def reference(time):
        """Return the reference coordinates of the point and the geometry of the triangle at a time."""
        geometry = compute_geometry((start + time * velocity)[None])
        return geometry.inverses[0] @ (point - start[0] - time * velocity[0]), geometry

    time = 0.3
    step = 1e-5
    derivative = (basis.values(reference(time + step)[0][None]) - basis.values(reference(time - step)[0][None]))[0]
    derivative /= 2 * step

    local, geometry = reference(time)
    gradients = basis.gradients(local[None])[0] @ geometry.inverses[0]
    mesh_velocity = np.concatenate(([1.0 - local.sum()], local)) @ velocity
    assert np.allclose(derivative, -gradients @ mesh_velocity, atol=1e-7)
