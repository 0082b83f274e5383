#!/usr/bin/env python
#  -*- coding: utf-8 -*-

"""End to end checks of the reference values: exact small spaces, balls of Z^2 and of the free group, median graph
families, Lp samples and the Euclidean reconstruction of negative type kernels."""

import time

import numpy as np
import pytest
from scipy.sparse.csgraph import shortest_path

from roundlab.metric import FiniteMetricSpace, power_transform
from roundlab.negative_type import (supremal_p, is_negative_type, brute_force_extremal, gns_embed,
                                    compression_lower_bound, DEFAULT_PMAX)
from roundlab.roundness import generalized_roundness, search_violation
from roundlab.generators import zn_ball, free_group_ball, grid, hypercube, path, cycle, equilateral, lp_sample
from roundlab.cubical import theta_classes, halfspace_embedding, verify_isometry


def _random_metric(rng, n):
    weights = rng.uniform(0.5, 5., size=(n, n))
    weights = np.triu(weights, 1)
    return FiniteMetricSpace(shortest_path(weights + weights.T, method='FW', directed=False))


def test_exact_small_spaces():
    cases = [(path(3)[1], 2., False),
             (cycle(4)[1], 1., False),
             (FiniteMetricSpace([[0., 1.5], [1.5, 0.]]), DEFAULT_PMAX, True),
             (equilateral(3)[1], DEFAULT_PMAX, True)]
    for (space, p_star, capped) in cases:
        tic = time.perf_counter()
        result = supremal_p(space)
        assert time.perf_counter() - tic < 1.
        assert result.capped == capped
        assert result.p_star == pytest.approx(p_star, abs=1e-4)


def test_zn_balls():
    for radius in (2, 3, 4):
        _, ball = zn_ball(2, radius)
        assert supremal_p(ball).p_star == pytest.approx(1., abs=1e-4)


def test_median_families():
    families = [path(n) for n in (2, 10, 50)]
    families += [free_group_ball(2, radius) for radius in (1, 2, 3, 4)]
    families += [grid([m, m]) for m in (2, 3, 5)] + [grid([2, 5])]
    families += [hypercube(n) for n in range(1, 6)]
    for (graph, space) in families:
        hps = theta_classes(graph)
        report = verify_isometry(halfspace_embedding(graph, hps), space)
        assert report.passed, '%s: %s' % (space.name, report)
        assert supremal_p(space).p_star >= 1. - 1e-4, space.name


def test_free_group_trend():
    values = [supremal_p(free_group_ball(2, radius)[1]).p_star for radius in (1, 2, 3, 4)]
    assert all(value >= 1. - 1e-4 for value in values)
    for (larger, smaller) in zip(values[:-1], values[1:]):
        assert smaller <= larger + 1e-4


def test_collinear_balls_below_two():
    balls = [zn_ball(1, 3), zn_ball(2, 2), zn_ball(3, 1), free_group_ball(2, 1), free_group_ball(3, 2)]
    for (_, ball) in balls:
        result = supremal_p(ball)
        assert not result.capped
        assert result.p_star <= 2. + result.tol, ball.name


def test_lp_calibration():
    for p in (1., 1.5, 2.):
        for seed in range(20):
            space = lp_sample(3, 8, p, seed=seed)
            assert supremal_p(space).p_star >= p - 1e-3, (p, seed)

    medians = []
    for count in range(4, 13):
        medians.append(np.median([supremal_p(lp_sample(3, count, 1.5, seed=seed)).p_star for seed in range(20)]))
    for (larger, smaller) in zip(medians[:-1], medians[1:]):
        assert smaller <= larger + 1e-4


def test_eigenvalue_test_agrees_with_sampling():
    rng = np.random.default_rng(2024)
    disagreements = []
    for trial in range(200):
        n = int(rng.integers(2, 9))
        if trial % 2:
            psi = power_transform(_random_metric(rng, n), rng.uniform(0.5, 4.)).psi
        else:
            psi = np.triu(rng.uniform(0., 1., size=(n, n)), 1)
            psi = psi + psi.T
        certificate = is_negative_type(psi)
        highest, _ = brute_force_extremal(psi, samples=100000, seed=trial)
        lowest, _ = brute_force_extremal(-psi, samples=100000, seed=trial)
        spread = highest + lowest
        if highest > certificate.tol and certificate.is_negative_type:
            disagreements.append(trial)
        elif not certificate.is_negative_type and highest <= 0. and certificate.extremal_value > 0.05 * spread:
            disagreements.append(trial)
    assert disagreements == []


def test_gns_reconstruction():
    rng = np.random.default_rng(7)
    for _ in range(100):
        space = _random_metric(rng, int(rng.integers(3, 9)))
        p = rng.uniform(0.1, 1.) * supremal_p(space).p_star
        kernel = power_transform(space, p)
        assert gns_embed(kernel).reconstruction_error(kernel) <= 1e-8


def test_path_certificates():
    _, p3 = path(3)
    certificate = search_violation(p3, 2.2, strategy='exhaustive', max_n=2)
    assert (certificate.config.a, certificate.config.b) == ((0, 2), (1, 1))
    assert certificate.deficiency == pytest.approx(4. - 2. ** 2.2, abs=1e-9)
    assert search_violation(p3, 1.9, strategy='exhaustive', max_n=3) is None


def test_compression_report():
    _, line = path(50)
    result = generalized_roundness(line)
    assert compression_lower_bound(result.p_star) == pytest.approx(1., abs=1e-4)
    assert result.compression_lower_bound == pytest.approx(1., abs=1e-4)
