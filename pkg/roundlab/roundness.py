#!/usr/bin/env python
#  -*- coding: utf-8 -*-
"""This module evaluates the 2n-gon inequality of generalized roundness and searches for violating configurations.

A configuration is a pair of multisets a = (a_1, ..., a_n), b = (b_1, ..., b_n) of points; repeated points are
allowed. At exponent p its deficiency is

    sum_{i,j} d(a_i, b_j)^p - sum_{i<j} (d(a_i, a_j)^p + d(b_i, b_j)^p)

and the inequality holds when the deficiency is non negative. With m_a and m_b the multiplicity vectors of a and b,
the deficiency equals -1/2 lambda^T Psi lambda where lambda = m_a - m_b and Psi = d^p: violating configurations are
integer witnesses that d^p is not of negative type.

Absence of a violation found by a search is not a proof that gr >= p; use generalized_roundness for lower bounds.
"""

import warnings
from itertools import combinations_with_replacement
from math import comb

import numpy as np

from .metric import power_transform
from .negative_type import supremal_p, DEFAULT_TOL, DEFAULT_PMAX
from .tools import pool_map, split_budget
from .exceptions import DomainError, SizeCapError, InconsistencyError

__author__ = "roundlab developers"
__licence__ = "GPLv3"
__status__ = "Development"

STRATEGIES = ('exhaustive', 'random', 'local')

# Exhaustive search refuses to enumerate more multiset pairs than this
MAX_EXHAUSTIVE_CONFIGS = 10 ** 7

# generalized_roundness cross-checks 2-gons exhaustively up to this number of points
CROSS_CHECK_MAX_POINTS = 12

# Size cap on the integer vectors built from negative type witnesses
MAX_WITNESS_GON_SIZE = 64


class GonConfiguration(object):
    """A 2n-gon: two multisets of n point indices.

    Parameters
    ----------
    a : list of int
        First multiset, repeats allowed
    b : list of int
        Second multiset, of the same size
    """
    def __init__(self, a, b):
        self.a = tuple(int(i) for i in a)
        self.b = tuple(int(i) for i in b)
        if len(self.a) != len(self.b):
            raise DomainError('Both sides of a gon must have the same size, got %u and %u'
                              % (len(self.a), len(self.b)))
        if len(self.a) < 2:
            raise DomainError('A gon needs n >= 2 points on each side, got %u' % len(self.a))

    def __eq__(self, other):
        return isinstance(other, GonConfiguration) and self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return 'GonConfiguration(a=%s, b=%s)' % (self.a, self.b)

    @property
    def n(self):
        return len(self.a)

    def check_range(self, nb_points):
        for i in self.a + self.b:
            if i < 0 or i >= nb_points:
                raise DomainError('Point index %d is out of range [0, %u[' % (i, nb_points))

    def coefficients(self, nb_points):
        """Returns lambda = m_a - m_b, the difference of the multiplicity vectors"""
        self.check_range(nb_points)
        return (np.bincount(self.a, minlength=nb_points) - np.bincount(self.b, minlength=nb_points)).astype(float)

    def as_dict(self, labels=None):
        data = {'n': self.n, 'a': list(self.a), 'b': list(self.b)}
        if labels is not None:
            data['a_labels'] = [labels[i] for i in self.a]
            data['b_labels'] = [labels[i] for i in self.b]
        return data


class ViolationCertificate(object):
    """A configuration violating the gon inequality at exponent p.

    Parameters
    ----------
    config : GonConfiguration
    p : float
    deficiency : float
        Negative deficiency of the configuration at p
    strategy : str, optional
        How the configuration was found
    """
    def __init__(self, config, p, deficiency, strategy=None):
        if not deficiency < 0.:
            raise DomainError('A violation certificate needs a negative deficiency, got %s' % deficiency)
        self.config = config
        self.p = float(p)
        self.deficiency = float(deficiency)
        self.strategy = strategy

    def __str__(self):
        return 'ViolationCertificate{a=%s, b=%s, p=%g, deficiency=%.9E}' % (self.config.a, self.config.b, self.p,
                                                                           self.deficiency)

    def as_dict(self, labels=None):
        return {'config': self.config.as_dict(labels),
                'p': self.p,
                'deficiency': self.deficiency,
                'strategy': self.strategy}

    @classmethod
    def from_dict(cls, data):
        return cls(GonConfiguration(data['config']['a'], data['config']['b']), data['p'], data['deficiency'],
                   data.get('strategy'))


def _deficiency(psi, a, b):
    a = np.asarray(a, dtype=int)
    b = np.asarray(b, dtype=int)
    cross = psi[np.ix_(a, b)].sum()
    within = psi[np.ix_(a, a)].sum() + psi[np.ix_(b, b)].sum()
    return float(cross - 0.5 * within)


def _violation_threshold(psi, n):
    """Deficiencies above -threshold are rounding noise, not violations"""
    norm = float(np.abs(psi).max()) if psi.size else 0.
    return 1e-9 * max(1., norm) * n * n


def _check_p(p):
    p = float(p)
    if not p > 0.:
        raise DomainError('Exponent must be positive, got %s' % p)
    return p


def gon_deficiency(space, config, p):
    """Evaluates the deficiency of the 2n-gon inequality for a configuration.

    Parameters
    ----------
    space : FiniteMetricSpace
    config : GonConfiguration
    p : float
        Positive exponent

    Returns
    -------
    float
        Non negative when the inequality holds for this configuration
    """
    p = _check_p(p)
    config.check_range(space.nb_points)
    return _deficiency(power_transform(space, p).psi, config.a, config.b)


def deficiency_curve(space, config, p_grid=None, p_max=DEFAULT_PMAX, step=0.1):
    """Deficiency of a fixed configuration over a grid of exponents.

    Parameters
    ----------
    space : FiniteMetricSpace
    config : GonConfiguration
    p_grid : array_like, optional
        Exponents. Default is step, 2*step, ... up to p_max.

    Returns
    -------
    list of (p, deficiency)
    """
    if p_grid is None:
        nb_steps = int(round(p_max / step))
        p_grid = [round(step * k, 10) for k in range(1, nb_steps + 1)]
    return [(float(p), gon_deficiency(space, config, p)) for p in p_grid]


def exhaustive_config_count(nb_points, max_n):
    """Number of unordered pairs of multisets of sizes 2..max_n enumerated by the exhaustive search"""
    total = 0
    for n in range(2, max_n + 1):
        nb_multisets = comb(nb_points + n - 1, n)
        total += nb_multisets * (nb_multisets + 1) // 2
    return total


def _exhaustive(psi, max_n):
    nb_points = psi.shape[0]
    best = (np.inf, None, None)
    for n in range(2, max_n + 1):
        multisets = list(combinations_with_replacement(range(nb_points), n))
        mult = np.array([np.bincount(m, minlength=nb_points) for m in multisets], dtype=float)
        for i in range(len(multisets)):
            lams = mult[i] - mult[i:]
            deficiencies = -0.5 * np.einsum('ij,jk,ik->i', lams, psi, lams)
            j = int(np.argmin(deficiencies))
            if deficiencies[j] < best[0]:
                best = (float(deficiencies[j]), multisets[i], multisets[i + j])
    return best


def _random_worker(psi, budget, max_n, rng):
    nb_points = psi.shape[0]
    best = (np.inf, None, None)
    remaining = budget
    batch = 4096
    while remaining > 0:
        size = min(batch, remaining)
        remaining -= size
        sizes = rng.integers(2, max_n + 1, size=size)
        a = rng.integers(0, nb_points, size=(size, max_n))
        b = rng.integers(0, nb_points, size=(size, max_n))
        used = np.arange(max_n)[np.newaxis, :] < sizes[:, np.newaxis]
        rows = np.repeat(np.arange(size), max_n).reshape(size, max_n)
        lams = np.zeros((size, nb_points))
        np.add.at(lams, (rows[used], a[used]), 1.)
        np.add.at(lams, (rows[used], b[used]), -1.)
        deficiencies = -0.5 * np.einsum('ij,jk,ik->i', lams, psi, lams)
        k = int(np.argmin(deficiencies))
        if deficiencies[k] < best[0]:
            best = (float(deficiencies[k]), tuple(a[k, :sizes[k]]), tuple(b[k, :sizes[k]]))
    return best


def _local_worker(psi, budget, max_n, rng):
    """Hill climbing by single index replacement, restarting on stagnation"""
    nb_points = psi.shape[0]
    best = (np.inf, None, None)
    evaluations = 0
    while evaluations < budget:
        n = int(rng.integers(2, max_n + 1))
        sides = [rng.integers(0, nb_points, size=n), rng.integers(0, nb_points, size=n)]
        lam = np.bincount(sides[0], minlength=nb_points) - np.bincount(sides[1], minlength=nb_points)
        lam = lam.astype(float)
        current = -0.5 * float(np.dot(lam, np.dot(psi, lam)))
        evaluations += 1
        patience = max(20, 2 * n * nb_points)
        stagnation = 0
        while evaluations < budget and stagnation < patience:
            side = int(rng.integers(0, 2))
            position = int(rng.integers(0, n))
            new_point = int(rng.integers(0, nb_points))
            old_point = int(sides[side][position])
            evaluations += 1
            if new_point == old_point:
                stagnation += 1
                continue
            sign = 1. if side == 0 else -1.
            delta = np.zeros(nb_points)
            delta[new_point] += sign
            delta[old_point] -= sign
            candidate = current - 0.5 * float(2. * np.dot(delta, np.dot(psi, lam)) + np.dot(delta, np.dot(psi, delta)))
            if candidate < current - 1e-15:
                sides[side][position] = new_point
                lam += delta
                current = candidate
                stagnation = 0
            else:
                stagnation += 1
        if current < best[0]:
            best = (current, tuple(sides[0]), tuple(sides[1]))
    return best


def _search_worker(task):
    psi, strategy, budget, max_n, seed = task
    rng = np.random.default_rng(seed)
    if budget <= 0:
        return (np.inf, None, None)
    if strategy == 'random':
        return _random_worker(psi, budget, max_n, rng)
    return _local_worker(psi, budget, max_n, rng)


def search_violation(space, p, strategy='exhaustive', budget=100000, max_n=3, seed=0, jobs=1, verbose=False):
    """Searches for a configuration violating the gon inequality at exponent p.

    Parameters
    ----------
    space : FiniteMetricSpace
    p : float
        Positive exponent
    strategy : {'exhaustive', 'random', 'local'}, optional
        'exhaustive' enumerates every pair of multisets of sizes 2..max_n and is complete at that size. 'random'
        samples configurations uniformly, 'local' hill-climbs from random starts. Default is 'exhaustive'.
    budget : int, optional
        Number of configurations evaluated by the random and local strategies, split between workers
    max_n : int, optional
        Largest gon size n. Default is 3.
    seed : int, optional
        Worker i is seeded with seed + i
    jobs : int, optional
        Number of workers for the random and local strategies. Results depend on seed and jobs only.
    verbose : bool, optional

    Returns
    -------
    ViolationCertificate or None
        The most negative configuration seen, if its deficiency is negative beyond rounding noise
    """
    p = _check_p(p)
    max_n = int(max_n)
    budget = int(budget)
    if max_n < 2:
        raise DomainError('max_n must be at least 2, got %d' % max_n)
    if budget < 1:
        raise DomainError('Search budget must be positive, got %d' % budget)
    if strategy not in STRATEGIES:
        raise DomainError('Unknown strategy %s. Choices are [%s]' % (strategy, ', '.join(STRATEGIES)))

    psi = power_transform(space, p).psi
    nb_points = space.nb_points

    if verbose:
        print('* Searching %s for a gon violation at p=%g (strategy: %s, max_n=%u)...'
              % (space.name, p, strategy, max_n))

    if strategy == 'exhaustive':
        nb_configs = exhaustive_config_count(nb_points, max_n)
        if nb_configs > MAX_EXHAUSTIVE_CONFIGS:
            raise SizeCapError('Exhaustive search over %u points up to n=%u needs %u configurations, cap is %u'
                               % (nb_points, max_n, nb_configs, MAX_EXHAUSTIVE_CONFIGS))
        deficiency, a, b = _exhaustive(psi, max_n)
    else:
        nb_workers = max(1, int(jobs))
        tasks = [(psi, strategy, worker_budget, max_n, int(seed) + i)
                 for (i, worker_budget) in enumerate(split_budget(budget, nb_workers))]
        results = pool_map(_search_worker, tasks, nb_workers)
        deficiency, a, b = min(results, key=lambda result: result[0])

    if a is None or not deficiency < -_violation_threshold(psi, max_n):
        if verbose:
            print('\t--> No violation found')
        return None

    certificate = ViolationCertificate(GonConfiguration(a, b), p, deficiency, strategy)
    if verbose:
        print('\t--> %s' % certificate)
    return certificate


def certificate_from_witness(space, witness, p, max_n=MAX_WITNESS_GON_SIZE):
    """Turns a real negative type witness into a violating gon configuration.

    The witness is scaled and rounded to an integer zero-sum vector; its positive part gives the multiset a and its
    negative part the multiset b. The smallest scale producing a violation is used.

    Parameters
    ----------
    space : FiniteMetricSpace
    witness : array_like
        Zero-sum vector with lambda^T (d^p) lambda > 0
    p : float
    max_n : int, optional
        Largest gon size tried

    Returns
    -------
    ViolationCertificate or None
    """
    p = _check_p(p)
    psi = power_transform(space, p).psi
    lam = np.asarray(witness, dtype=float)
    if lam.shape != (space.nb_points,):
        raise DomainError('Witness has shape %s, expected (%u,)' % (lam.shape, space.nb_points))
    lam = lam / np.abs(lam).max()

    threshold = _violation_threshold(psi, max_n)
    scale = 1
    while True:
        target = scale * lam
        m = np.rint(target).astype(int)
        residual = int(m.sum())
        while residual != 0:
            error = m - target
            if residual > 0:
                k = int(np.argmax(error))
                m[k] -= 1
                residual -= 1
            else:
                k = int(np.argmin(error))
                m[k] += 1
                residual += 1
        n = int(m[m > 0].sum())
        if n > max_n:
            return None
        if n >= 2:
            deficiency = -0.5 * float(np.dot(m, np.dot(psi, m)))
            if deficiency < -threshold:
                a = np.repeat(np.arange(space.nb_points), np.where(m > 0, m, 0))
                b = np.repeat(np.arange(space.nb_points), np.where(m < 0, -m, 0))
                return ViolationCertificate(GonConfiguration(a, b), p, deficiency, 'witness')
        scale += 1


def generalized_roundness(space, tol=DEFAULT_TOL, p_max=DEFAULT_PMAX, verbose=False):
    """Computes the generalized roundness of a finite metric space.

    It is the supremal exponent p for which d^p is of negative type. On spaces with at most 12 points, the result is
    cross-checked: no 2-gon may violate the inequality just below p*.

    Parameters
    ----------
    space : FiniteMetricSpace
    tol : float, optional
        Default is 1e-6
    p_max : float, optional
        Default is 8

    Returns
    -------
    PStarResult
    """
    result = supremal_p(space, tol=tol, p_max=p_max, verbose=verbose)

    p_check = result.p_star - result.tol
    if space.nb_points <= CROSS_CHECK_MAX_POINTS and space.nb_points >= 1 and p_check > 0.:
        certificate = search_violation(space, p_check, strategy='exhaustive', max_n=2)
        if certificate is not None:
            raise InconsistencyError('Inconsistent roundness of %s: %s below p*=%.9f'
                               % (space.name, certificate, result.p_star))
        if verbose:
            print('\t--> No 2-gon violation at p* - tol')

    return result


def completeness_gap(space, result, offset=0.05, max_n=5):
    """Looks for a violation just above p* by exhaustive search.

    Returns the violation certificate, or None when none exists up to gon size max_n. The latter is a known gap (the
    gon size at which violations appear is not bounded a priori) and is reported with a warning.
    """
    p = result.p_star + offset
    if result.capped or p >= result.p_max:
        return None
    certificate = search_violation(space, p, strategy='exhaustive', max_n=max_n)
    if certificate is None:
        warnings.warn('No violation up to n=%u at p*+%g on %s: recorded as a gap' % (max_n, offset, space.name))
    return certificate
