#!/usr/bin/env python
#  -*- coding: utf-8 -*-
"""This module concerns finite metric spaces and the kernels derived from them.

Distances are stored as 64 bits floats. When every distance is an integer (graph metrics), the exact integer matrix
is kept along and used wherever an exact comparison is possible. Point labels are opaque strings, every computation
is index based.
"""

import numpy as np
from itertools import count

from .exceptions import StructuralError, DomainError, MetricError

__author__ = "roundlab developers"
__licence__ = "GPLv3"
__status__ = "Development"

# Absolute tolerance on the triangle inequality for float inputs (integer inputs are checked exactly)
TRIANGLE_ATOL = 1e-9

# Past this number of violations, the metric report is truncated
MAX_REPORTED_VIOLATIONS = 1000

# Integer powers at or above this value are not exactly representable as floats
EXACT_FLOAT_INT = 2 ** 53


def _is_integral(arr):
    """Tells whether every entry of a finite array is an integer value"""
    arr = np.asarray(arr)
    if np.issubdtype(arr.dtype, np.integer):
        return True
    if not np.all(np.isfinite(arr)):
        return False
    return bool(np.all(arr == np.rint(arr)))


def _as_square_matrix(matrix):
    arr = np.array(matrix, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise StructuralError('Expected a square matrix, got an array of shape %s' % (arr.shape,))
    return arr


class MetricReport(object):
    """Result of the validation of the metric axioms.

    Parameters
    ----------
    violations : list
        List of (axiom, witness) tuples. axiom is one of 'finite', 'diagonal', 'symmetry', 'positivity' or
        'triangle'. The witness is (i,) for the diagonal, (i, j) for pairs and (i, k, j) for the triangle
        inequality, meaning that dist[i][k] > dist[i][j] + dist[j][k].
    truncated : bool, optional
        True when more than MAX_REPORTED_VIOLATIONS violations were found and the list has been cut
    """
    def __init__(self, violations, truncated=False):
        self._violations = list(violations)
        self._truncated = bool(truncated)

    @property
    def valid(self):
        """Whether every metric axiom holds"""
        return len(self._violations) == 0

    @property
    def violations(self):
        """The list of (axiom, witness) violations"""
        return self._violations

    @property
    def truncated(self):
        """Whether the violation list has been truncated"""
        return self._truncated

    def __bool__(self):
        return self.valid

    def __str__(self):
        if self.valid:
            return 'MetricReport{valid}'
        lines = ['MetricReport{invalid, %u violation(s)%s}' % (len(self._violations),
                                                            ', truncated' if self._truncated else '')]
        for axiom, witness in self._violations[:10]:
            lines.append('\t--> %s %s' % (axiom, witness))
        if len(self._violations) > 10:
            lines.append('\t--> ...')
        return '\n'.join(lines)

    def as_dict(self):
        return {'valid': self.valid,
                'truncated': self._truncated,
                'violations': [[axiom, list(witness)] for axiom, witness in self._violations]}


def validate_metric(matrix, atol=TRIANGLE_ATOL):
    """Checks the metric axioms on a square matrix.

    Parameters
    ----------
    matrix : array_like
        Square matrix of distances
    atol : float, optional
        Absolute tolerance on the triangle inequality. It is ignored for integer valued matrices that are checked
        exactly.

    Returns
    -------
    MetricReport
    """
    dist = _as_square_matrix(matrix)
    n = dist.shape[0]
    if _is_integral(dist):
        atol = 0.

    violations = []

    finite = np.isfinite(dist)
    if not np.all(finite):
        for i, j in np.argwhere(~finite):
            violations.append(('finite', (int(i), int(j))))
        return MetricReport(violations[:MAX_REPORTED_VIOLATIONS], len(violations) > MAX_REPORTED_VIOLATIONS)

    for i in np.nonzero(np.diag(dist) != 0.)[0]:
        violations.append(('diagonal', (int(i),)))

    upper = np.triu(np.ones((n, n), dtype=bool), k=1)

    for i, j in np.argwhere(upper & (dist != dist.T)):
        violations.append(('symmetry', (int(i), int(j))))

    for i, j in np.argwhere(upper & ((dist <= 0.) | (dist.T <= 0.))):
        violations.append(('positivity', (int(i), int(j))))

    triangles = []
    for j in range(n):
        detour = dist[:, j][:, np.newaxis] + dist[j, :][np.newaxis, :]
        bad = upper & (dist > detour + atol)
        bad[j, :] = False
        bad[:, j] = False
        for i, k in np.argwhere(bad):
            triangles.append(('triangle', (int(i), int(k), j)))
        if len(triangles) > MAX_REPORTED_VIOLATIONS:
            break
    triangles.sort(key=lambda violation: violation[1])
    violations.extend(triangles)

    truncated = len(violations) > MAX_REPORTED_VIOLATIONS
    return MetricReport(violations[:MAX_REPORTED_VIOLATIONS], truncated)


class FiniteMetricSpace(object):
    """A finite metric space given by its labeled points and its distance matrix.

    Instances are immutable: the distance matrices are flagged read-only.

    Parameters
    ----------
    dist : array_like
        (n x n) matrix of distances
    labels : list of str, optional
        Point identifiers. Default is the point indices as strings.
    name : str, optional
        The space's name. If None, an automatic name based on an internal ID is given.
    force : bool, optional
        If True, a matrix violating the metric axioms is accepted anyway. Default is False.

    Raises
    ------
    MetricError
        If the matrix is not a metric and force is False
    """
    _ids = count(0)

    def __init__(self, dist, labels=None, name=None, force=False):
        dist = _as_square_matrix(dist)
        n = dist.shape[0]

        report = validate_metric(dist)
        if not report.valid and not force:
            raise MetricError('Distance matrix is not a metric:\n%s' % report, report)
        self._report = report

        if labels is None:
            labels = [str(i) for i in range(n)]
        labels = tuple(str(label) for label in labels)
        if len(labels) != n:
            raise StructuralError('%u labels given for %u points' % (len(labels), n))
        if len(set(labels)) != n:
            raise DomainError('Point labels must be distinct')
        self._labels = labels
        self._label_index = dict((label, i) for (i, label) in enumerate(labels))

        self._dist = dist
        self._dist.flags.writeable = False
        if _is_integral(dist):
            self._int_dist = np.rint(dist).astype(np.int64)
            self._int_dist.flags.writeable = False
        else:
            self._int_dist = None

        self._id = next(self._ids)
        if not name:
            self._name = 'space_%u' % self._id
        else:
            self._name = str(name)

    def __str__(self):
        str_repr = """
        --------------------------------------------
        \tSPACE NAME : %s
        --------------------------------------------

        Number of points: %u
        Integral metric:  %s
        Diameter:         %s
        Valid metric:     %s
        """ % (self._name,
               self.nb_points,
               self.is_integral,
               self.diameter,
               self._report.valid)
        return str_repr

    def __len__(self):
        return self.nb_points

    @classmethod
    def from_matrix(cls, dist, labels=None, force=False):
        return cls(dist, labels=labels, force=force)

    @property
    def name(self):
        """The space's name"""
        return self._name

    @property
    def labels(self):
        """The point labels"""
        return self._labels

    @property
    def nb_points(self):
        """Number of points"""
        return self._dist.shape[0]

    @property
    def dist(self):
        """The (read-only) float distance matrix"""
        return self._dist

    @property
    def int_dist(self):
        """The exact integer distance matrix, or None if some distance is not an integer"""
        return self._int_dist

    @property
    def is_integral(self):
        """Whether every distance is an integer"""
        return self._int_dist is not None

    @property
    def report(self):
        """The MetricReport computed at construction"""
        return self._report

    @property
    def diameter(self):
        if self.nb_points == 0:
            return 0
        if self.is_integral:
            return int(self._int_dist.max())
        return float(self._dist.max())

    def index(self, label):
        """Returns the index of the point with the given label"""
        try:
            return self._label_index[str(label)]
        except KeyError:
            raise DomainError('No point labeled %s in %s' % (label, self._name))

    def scaled(self, factor):
        """Returns a new space whose distances are multiplied by factor > 0"""
        factor = float(factor)
        if factor <= 0.:
            raise DomainError('Scaling factor must be positive, got %f' % factor)
        return FiniteMetricSpace(factor * self._dist, labels=self._labels, name='%s_x%g' % (self._name, factor),
                                 force=not self._report.valid)

    def relabel(self, labels, name=None):
        """Returns the same metric with new point labels"""
        return FiniteMetricSpace(self._dist, labels=labels, name=name or self._name, force=not self._report.valid)


class Kernel(object):
    """A symmetric kernel with zero diagonal, candidate to be of negative type.

    Parameters
    ----------
    psi : array_like
        (n x n) symmetric matrix with zero diagonal

    Raises
    ------
    StructuralError
        If psi is not square
    DomainError
        If psi is not symmetric or has a nonzero diagonal entry
    """
    def __init__(self, psi):
        psi = _as_square_matrix(psi)
        if not np.all(np.isfinite(psi)):
            raise DomainError('Kernel has non finite entries')
        if np.any(np.diag(psi) != 0.):
            i = int(np.nonzero(np.diag(psi))[0][0])
            raise DomainError('Kernel has a nonzero diagonal entry at index %u' % i)
        atol = 1e-12 * max(1., float(np.abs(psi).max()) if psi.size else 1.)
        if not np.allclose(psi, psi.T, rtol=0., atol=atol):
            i, j = np.argwhere(np.abs(psi - psi.T) > atol)[0]
            raise DomainError('Kernel is not symmetric at (%u, %u)' % (i, j))
        self._psi = 0.5 * (psi + psi.T)
        self._psi.flags.writeable = False

    @property
    def psi(self):
        """The (read-only) kernel matrix"""
        return self._psi

    @property
    def nb_points(self):
        return self._psi.shape[0]

    @property
    def norm(self):
        """Largest absolute entry of the kernel"""
        if self._psi.size == 0:
            return 0.
        return float(np.abs(self._psi).max())


def as_kernel(psi):
    """Returns psi as a Kernel, wrapping raw matrices"""
    if isinstance(psi, Kernel):
        return psi
    return Kernel(psi)


def power_transform(space, p):
    """Builds the kernel d^p.

    Parameters
    ----------
    space : FiniteMetricSpace
        The metric space
    p : float
        Positive exponent

    Returns
    -------
    Kernel
        Kernel with entries dist[i][j]**p. The transform is exact for integer metrics and integer exponents as long as
        diameter**p stays below 2**53.
    """
    p = float(p)
    if not p > 0.:
        raise DomainError('Exponent must be positive, got %s' % p)
    if space.is_integral and p.is_integer() and space.diameter ** int(p) < EXACT_FLOAT_INT:
        psi = np.power(space.int_dist, int(p)).astype(float)
    else:
        psi = np.power(space.dist, p)
    return Kernel(psi)


def root_transform(kernel, p):
    """Elementwise (1/p)-th root of a kernel with non-negative entries, the inverse of power_transform"""
    p = float(p)
    if not p > 0.:
        raise DomainError('Exponent must be positive, got %s' % p)
    kernel = as_kernel(kernel)
    if np.any(kernel.psi < 0.):
        raise DomainError('Cannot take roots of a kernel with negative entries')
    return np.power(kernel.psi, 1. / p)


def restrict(space, subset):
    """Restricts a metric space to a subset of its points.

    Parameters
    ----------
    space : FiniteMetricSpace
        The metric space
    subset : list of int
        Distinct point indices

    Returns
    -------
    FiniteMetricSpace
        The induced subspace, labels carried over
    """
    subset = [int(i) for i in subset]
    n = space.nb_points
    if len(set(subset)) != len(subset):
        raise DomainError('Duplicate index in subset %s' % subset)
    for i in subset:
        if i < 0 or i >= n:
            raise DomainError('Index %d is out of range [0, %u[' % (i, n))

    idx = np.asarray(subset, dtype=int)
    if space.is_integral:
        dist = space.int_dist[np.ix_(idx, idx)]
    else:
        dist = space.dist[np.ix_(idx, idx)]
    labels = [space.labels[i] for i in subset]
    return FiniteMetricSpace(dist, labels=labels, name='%s_sub' % space.name, force=not space.report.valid)


def is_isometric(space_a, space_b, atol=1e-9):
    """Tells whether two spaces have the same distance matrix, index per index.

    The comparison is exact when both metrics are integral.
    """
    if space_a.nb_points != space_b.nb_points:
        return False
    if space_a.is_integral and space_b.is_integral:
        return bool(np.array_equal(space_a.int_dist, space_b.int_dist))
    return bool(np.allclose(space_a.dist, space_b.dist, rtol=0., atol=atol))
