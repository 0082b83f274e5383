#!/usr/bin/env python
#  -*- coding: utf-8 -*-
"""This module decides whether kernels are of negative type and computes the supremal exponent p for which d^p is
of negative type.

For a finite metric space, the generalized roundness is exactly this supremal exponent. The set of admissible
exponents {p : d^p is of negative type} is a closed interval starting at 0 (pointwise limits of negative type kernels
are of negative type, and negative type is inherited by smaller powers), so the supremum is reported as attained and
found by bisection.

Kernels of negative type are realized as squared distances in a Euclidean space by factoring the Gram matrix
G[i][j] = (psi(x_i, x_0) + psi(x_j, x_0) - psi(x_i, x_j)) / 2.
"""

import math
from functools import lru_cache

import numpy as np
from scipy import linalg

from .metric import Kernel, as_kernel, power_transform
from .exceptions import DomainError, MetricError, NotNegativeTypeError

__author__ = "roundlab developers"
__licence__ = "GPLv3"
__status__ = "Development"

DEFAULT_TOL = 1e-6
DEFAULT_PMAX = 8.

# Relative eigenvalue threshold, scaled by max(1, |psi|_inf)
EIGEN_RTOL = 1e-9


def default_tolerance(kernel):
    """Eigenvalue threshold used when none is given: 1e-9 * max(1, max |psi|)"""
    return EIGEN_RTOL * max(1., as_kernel(kernel).norm)


@lru_cache(maxsize=64)
def _hyperplane_basis(n):
    """Orthonormal basis (n x n-1) of the hyperplane {sum(lambda) = 0}"""
    basis = linalg.null_space(np.ones((1, n)))
    basis.flags.writeable = False
    return basis


def _normalize_witness(lam):
    lam = lam - lam.mean()
    lam /= np.linalg.norm(lam)
    # Sign convention: first significant coefficient is positive
    significant = np.nonzero(np.abs(lam) > 1e-12)[0]
    if significant.size and lam[significant[0]] < 0.:
        lam = -lam
    return lam


class NegTypeCertificate(object):
    """Outcome of a negative type test.

    Parameters
    ----------
    is_negative_type : bool
        Whether lambda^T Psi lambda <= tol for every unit lambda with zero sum
    extremal_value : float
        Maximum of lambda^T Psi lambda over unit vectors with zero sum
    witness : ndarray or None
        The maximizing vector when the kernel is not of negative type
    tol : float
        The threshold used
    p : float, optional
        The exponent of the power kernel d^p the test was run on, if any
    """
    def __init__(self, is_negative_type, extremal_value, witness=None, tol=0., p=None):
        self.is_negative_type = bool(is_negative_type)
        self.extremal_value = float(extremal_value)
        self.witness = None if witness is None else np.asarray(witness, dtype=float)
        self.tol = float(tol)
        self.p = None if p is None else float(p)

    def __str__(self):
        if self.is_negative_type:
            status = 'negative type'
        else:
            status = 'NOT negative type'
        str_repr = 'NegTypeCertificate{%s, extremal=%.6E, tol=%.1E' % (status, self.extremal_value, self.tol)
        if self.p is not None:
            str_repr += ', p=%.9f' % self.p
        return str_repr + '}'

    def as_dict(self):
        return {'is_negative_type': self.is_negative_type,
                'extremal_value': self.extremal_value,
                'witness': None if self.witness is None else [float(x) for x in self.witness],
                'tol': self.tol,
                'p': self.p}

    @classmethod
    def from_dict(cls, data):
        return cls(data['is_negative_type'], data['extremal_value'], data.get('witness'), data.get('tol', 0.),
                   data.get('p'))


def quadratic_form(kernel, lam):
    """Returns lambda^T Psi lambda"""
    kernel = as_kernel(kernel)
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (kernel.nb_points,):
        raise DomainError('Coefficient vector has shape %s, expected (%u,)' % (lam.shape, kernel.nb_points))
    return float(np.dot(lam, np.dot(kernel.psi, lam)))


def is_negative_type(kernel, tol=None):
    """Decides whether a kernel is of negative type.

    The quadratic form of the kernel is compressed to the hyperplane {sum(lambda) = 0} through an orthonormal basis
    of this hyperplane (this is P Psi P with the all-ones direction deflated) and its top eigenvalue is computed with
    a symmetric eigensolver.

    Parameters
    ----------
    kernel : Kernel or array_like
        Symmetric kernel with zero diagonal
    tol : float, optional
        Eigenvalue threshold. Default is 1e-9 * max(1, max |psi|).

    Returns
    -------
    NegTypeCertificate
    """
    kernel = as_kernel(kernel)
    if tol is None:
        tol = default_tolerance(kernel)
    tol = float(tol)
    if not tol > 0.:
        raise DomainError('Tolerance must be positive, got %s' % tol)

    n = kernel.nb_points
    if n < 2:
        return NegTypeCertificate(True, 0., None, tol)

    basis = _hyperplane_basis(n)
    compressed = np.dot(basis.T, np.dot(kernel.psi, basis))
    compressed = 0.5 * (compressed + compressed.T)
    eigenvalues, eigenvectors = linalg.eigh(compressed)
    extremal = float(eigenvalues[-1])

    if extremal <= tol:
        return NegTypeCertificate(True, extremal, None, tol)

    witness = _normalize_witness(np.dot(basis, eigenvectors[:, -1]))
    return NegTypeCertificate(False, extremal, witness, tol)


def brute_force_extremal(kernel, samples=100000, seed=0, batch=10000):
    """Estimates the maximum of lambda^T Psi lambda over unit zero-sum vectors by random sampling.

    It is an independent (and incomplete) oracle for is_negative_type: the returned value never exceeds the true
    maximum.

    Returns
    -------
    value : float
        The largest value found
    lam : ndarray
        The corresponding vector
    """
    kernel = as_kernel(kernel)
    n = kernel.nb_points
    if n < 2:
        return 0., np.zeros(n)
    rng = np.random.default_rng(seed)
    best_value = -np.inf
    best_lam = None
    remaining = int(samples)
    while remaining > 0:
        size = min(batch, remaining)
        remaining -= size
        lams = rng.standard_normal((size, n))
        lams -= lams.mean(axis=1)[:, np.newaxis]
        lams /= np.linalg.norm(lams, axis=1)[:, np.newaxis]
        values = np.einsum('ij,jk,ik->i', lams, kernel.psi, lams)
        imax = int(np.argmax(values))
        if values[imax] > best_value:
            best_value = float(values[imax])
            best_lam = lams[imax].copy()
    return best_value, best_lam


def is_invariant(kernel, permutation, atol=None):
    """Tells whether psi(g x, g y) = psi(x, y) for the point permutation g.

    Parameters
    ----------
    kernel : Kernel or array_like
    permutation : list of int
        permutation[i] is the index of g x_i
    atol : float, optional
        Absolute tolerance. Default is 1e-12 * max(1, max |psi|).
    """
    kernel = as_kernel(kernel)
    perm = np.asarray(permutation, dtype=int)
    n = kernel.nb_points
    if perm.shape != (n,) or not np.array_equal(np.sort(perm), np.arange(n)):
        raise DomainError('Not a permutation of the %u points: %s' % (n, list(permutation)))
    if atol is None:
        atol = 1e-12 * max(1., kernel.norm)
    return bool(np.allclose(kernel.psi[np.ix_(perm, perm)], kernel.psi, rtol=0., atol=atol))


class PStarResult(object):
    """The supremal exponent p* for which d^p is of negative type, with its bracketing certificates.

    Parameters
    ----------
    p_star : float
        The supremal exponent, within tol
    capped : bool
        True when d^p_max is still of negative type; p_star is then p_max
    lower_certificate : NegTypeCertificate
        Certificate at p_star - tol (of negative type)
    upper_certificate : NegTypeCertificate or None
        Certificate at p_star + tol (not of negative type), None when capped
    tol : float
        Bisection tolerance
    p_max : float
        Upper end of the bisection bracket

    Certificates are computed on the space rescaled to unit diameter: their witnesses are those of d^p, their
    extremal values are divided by diameter**p.
    """
    def __init__(self, p_star, capped, lower_certificate, upper_certificate, tol, p_max):
        self.p_star = float(p_star)
        self.capped = bool(capped)
        self.lower_certificate = lower_certificate
        self.upper_certificate = upper_certificate
        self.tol = float(tol)
        self.p_max = float(p_max)

    def __str__(self):
        if self.capped:
            return 'PStarResult{p*=%.6f (capped at p_max)}' % self.p_star
        return 'PStarResult{p*=%.6f +/- %.1E}' % (self.p_star, self.tol)

    @property
    def compression_lower_bound(self):
        return compression_lower_bound(self.p_star)

    def as_dict(self):
        return {'p_star': self.p_star,
                'capped': self.capped,
                'tol': self.tol,
                'p_max': self.p_max,
                'compression_lower_bound': self.compression_lower_bound,
                'lower_certificate': self.lower_certificate.as_dict(),
                'upper_certificate': None if self.upper_certificate is None else self.upper_certificate.as_dict()}

    @classmethod
    def from_dict(cls, data):
        upper = data.get('upper_certificate')
        return cls(data['p_star'], data['capped'], NegTypeCertificate.from_dict(data['lower_certificate']),
                   None if upper is None else NegTypeCertificate.from_dict(upper), data['tol'], data['p_max'])


def _power_certificate(space, p):
    """Negative type certificate of d^p. At p = 0, d^0 is the limit kernel equal to 1 off the diagonal."""
    if p <= 0.:
        n = space.nb_points
        kernel = Kernel(np.ones((n, n)) - np.eye(n))
        p = 0.
    else:
        kernel = power_transform(space, p)
    certificate = is_negative_type(kernel)
    certificate.p = p
    return certificate


def supremal_p(space, tol=DEFAULT_TOL, p_max=DEFAULT_PMAX, verbose=False):
    """Computes the supremal exponent p in [0, p_max] for which d^p is of negative type.

    Parameters
    ----------
    space : FiniteMetricSpace
        A valid metric space
    tol : float, optional
        Width of the final bisection bracket. Default is 1e-6.
    p_max : float, optional
        Upper end of the search interval. Default is 8.
    verbose : bool, optional
        If True, prints the bisection progress

    Returns
    -------
    PStarResult
    """
    if not space.report.valid:
        raise MetricError('supremal_p requires a valid metric space', space.report)
    tol = float(tol)
    p_max = float(p_max)
    if not tol > 0.:
        raise DomainError('Tolerance must be positive, got %s' % tol)
    if not p_max > 0.:
        raise DomainError('p_max must be positive, got %s' % p_max)

    if verbose:
        print('* Bisection of the negative type exponent of %s over [0, %g]...' % (space.name, p_max))

    # Bisection on the unit diameter rescaling, p* is scale invariant
    if space.nb_points > 1:
        space = space.scaled(1. / space.diameter)

    top = _power_certificate(space, p_max)
    if top.is_negative_type:
        lower = _power_certificate(space, max(p_max - tol, 0.))
        if verbose:
            print('\t--> d^%g is of negative type, p* is capped' % p_max)
        return PStarResult(p_max, True, lower, None, tol, p_max)

    nb_iterations = max(1, int(math.ceil(math.log(p_max / tol, 2))))
    low, high = 0., p_max
    high_certificate = top
    for _ in range(nb_iterations):
        mid = 0.5 * (low + high)
        certificate = _power_certificate(space, mid)
        if certificate.is_negative_type:
            low = mid
        else:
            high = mid
            high_certificate = certificate

    p_star = low
    lower = _power_certificate(space, max(p_star - tol, 0.))
    upper = _power_certificate(space, p_star + tol)
    if upper.is_negative_type:
        # Numerically flat extremal value past high: the failing midpoint is the tightest upper certificate
        upper = high_certificate

    if verbose:
        print('\t--> p* = %.9f after %u iterations' % (p_star, nb_iterations))

    return PStarResult(p_star, False, lower, upper, tol, p_max)


def gram_from_kernel(kernel, basepoint=0):
    """Builds the Gram matrix G[i][j] = (psi(x_i, x_0) + psi(x_j, x_0) - psi(x_i, x_j)) / 2.

    G is positive semidefinite if and only if the kernel is of negative type.

    Parameters
    ----------
    kernel : Kernel or array_like
    basepoint : int, optional
        Index of x_0. Default is 0.

    Returns
    -------
    ndarray
    """
    kernel = as_kernel(kernel)
    n = kernel.nb_points
    basepoint = int(basepoint)
    if basepoint < 0 or basepoint >= n:
        raise DomainError('Basepoint %d is out of range [0, %u[' % (basepoint, n))
    psi = kernel.psi
    to_base = psi[:, basepoint]
    return 0.5 * (to_base[:, np.newaxis] + to_base[np.newaxis, :] - psi)


class EuclideanConfiguration(object):
    """Points of a Euclidean space realizing a negative type kernel as squared distances.

    Parameters
    ----------
    points : ndarray
        (n x dim) coordinates, dim <= n-1
    basepoint_index : int
        Index of the point sent to the origin
    eigenvalues : ndarray, optional
        Gram eigenvalues kept for each dimension, in decreasing order
    """
    def __init__(self, points, basepoint_index, eigenvalues=None):
        self.points = np.asarray(points, dtype=float)
        self.basepoint_index = int(basepoint_index)
        self.eigenvalues = None if eigenvalues is None else np.asarray(eigenvalues, dtype=float)

    @property
    def nb_points(self):
        return self.points.shape[0]

    @property
    def dimension(self):
        return self.points.shape[1]

    def squared_distances(self):
        """Matrix of squared Euclidean distances between points"""
        diff = self.points[:, np.newaxis, :] - self.points[np.newaxis, :, :]
        return np.einsum('ijk,ijk->ij', diff, diff)

    def reconstruction_error(self, kernel):
        """max |‖f(x_i) - f(x_j)‖^2 - psi(x_i, x_j)|"""
        kernel = as_kernel(kernel)
        if kernel.nb_points != self.nb_points:
            raise DomainError('Kernel has %u points, configuration has %u' % (kernel.nb_points, self.nb_points))
        if self.nb_points == 0:
            return 0.
        return float(np.abs(self.squared_distances() - kernel.psi).max())

    def as_dict(self):
        return {'basepoint_index': self.basepoint_index,
                'dimension': self.dimension,
                'points': [[float(x) for x in point] for point in self.points],
                'eigenvalues': None if self.eigenvalues is None else [float(x) for x in self.eigenvalues]}

    @classmethod
    def from_dict(cls, data):
        points = np.asarray(data['points'], dtype=float).reshape(len(data['points']), int(data['dimension']))
        return cls(points, data['basepoint_index'], data.get('eigenvalues'))


def gns_embed(kernel, basepoint=0, tol=None):
    """Embeds a negative type kernel in a Euclidean space so that psi(x, y) = ‖f(x) - f(y)‖^2.

    The Gram matrix is diagonalized; eigenvalues in [-tol, 0] are numerical noise and clamped to 0, anything below
    -tol means the kernel is not of negative type.

    Parameters
    ----------
    kernel : Kernel or array_like
        Kernel of negative type
    basepoint : int, optional
        Index of the point sent to the origin. Default is 0.
    tol : float, optional
        Clamping window. Default is 1e-9 * max(1, max |psi|).

    Returns
    -------
    EuclideanConfiguration

    Raises
    ------
    NotNegativeTypeError
        If the Gram matrix has an eigenvalue below -tol
    """
    kernel = as_kernel(kernel)
    if tol is None:
        tol = default_tolerance(kernel)
    gram = gram_from_kernel(kernel, basepoint)
    n = kernel.nb_points

    eigenvalues, eigenvectors = linalg.eigh(gram)
    if n and eigenvalues[0] < -tol:
        raise NotNegativeTypeError('Kernel is not of negative type: Gram eigenvalue %.6E < -%.1E'
                                   % (eigenvalues[0], tol), eigenvalues[0])

    eigenvalues = np.where(eigenvalues < 0., 0., eigenvalues)
    keep = np.nonzero(eigenvalues > 0.)[0][::-1][:max(n - 1, 0)]
    points = eigenvectors[:, keep] * np.sqrt(eigenvalues[keep])[np.newaxis, :]
    points[int(basepoint), :] = 0.
    return EuclideanConfiguration(points, basepoint, eigenvalues[keep])


def compression_lower_bound(p_star):
    """Lower bound p*/2 on the equivariant Hilbert space compression"""
    p_star = float(p_star)
    if p_star < 0.:
        raise DomainError('p* must be non negative, got %s' % p_star)
    return p_star / 2.
