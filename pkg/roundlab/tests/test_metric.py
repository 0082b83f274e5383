#!/usr/bin/env python
#  -*- coding: utf-8 -*-

import numpy as np
import pytest

from roundlab.metric import (FiniteMetricSpace, Kernel, validate_metric, power_transform, root_transform,
                             restrict, is_isometric)
from roundlab.exceptions import MetricError, StructuralError, DomainError

C4_DIST = [[0, 1, 2, 1],
           [1, 0, 1, 2],
           [2, 1, 0, 1],
           [1, 2, 1, 0]]

c4 = FiniteMetricSpace(C4_DIST, labels=['a', 'b', 'c', 'd'], name='c4')


def test_valid_report():
    report = validate_metric(C4_DIST)
    assert report.valid
    assert bool(report)
    assert report.violations == []


def test_triangle_violation_witness():
    report = validate_metric([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
    assert not report.valid
    assert report.violations == [('triangle', (0, 2, 1))]


def test_float_triangle_tolerance():
    # Rounding noise below the tolerance is accepted
    assert validate_metric([[0., 1., 2. + 1e-12], [1., 0., 1.], [2. + 1e-12, 1., 0.]]).valid
    assert not validate_metric([[0., 1., 2.1], [1., 0., 1.], [2.1, 1., 0.]]).valid


def test_axiom_violations():
    assert validate_metric([[0, 1], [2, 0]]).violations == [('symmetry', (0, 1))]
    assert validate_metric([[1, 1], [1, 0]]).violations == [('diagonal', (0,))]
    assert validate_metric([[0, 0], [0, 0]]).violations == [('positivity', (0, 1))]
    assert validate_metric([[0, np.inf], [np.inf, 0]]).violations == [('finite', (0, 1)), ('finite', (1, 0))]


def test_space_construction():
    assert c4.nb_points == 4
    assert len(c4) == 4
    assert c4.is_integral
    assert c4.int_dist.dtype == np.int64
    assert c4.diameter == 2
    assert c4.labels == ('a', 'b', 'c', 'd')
    assert c4.index('c') == 2
    assert 'c4' in str(c4)
    with pytest.raises(ValueError):
        c4.dist[0, 1] = 3.


def test_space_rejections():
    with pytest.raises(MetricError) as err:
        FiniteMetricSpace([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
    assert err.value.report.violations[0][0] == 'triangle'

    with pytest.raises(StructuralError):
        FiniteMetricSpace([[0, 1, 2], [1, 0, 1]])
    with pytest.raises(DomainError):
        FiniteMetricSpace(C4_DIST, labels=['a', 'a', 'b', 'c'])
    with pytest.raises(DomainError):
        c4.index('z')


def test_forced_space():
    space = FiniteMetricSpace([[0, 1, 5], [1, 0, 1], [5, 1, 0]], force=True)
    assert not space.report.valid


def test_float_space():
    space = FiniteMetricSpace([[0., 0.5], [0.5, 0.]])
    assert not space.is_integral
    assert space.int_dist is None
    assert space.diameter == pytest.approx(0.5)


def test_scaled_and_relabel():
    scaled = c4.scaled(2.5)
    assert scaled.dist[0, 2] == pytest.approx(5.)
    assert not is_isometric(c4, scaled)
    relabeled = c4.relabel(['w', 'x', 'y', 'z'])
    assert is_isometric(c4, relabeled)
    assert relabeled.labels[0] == 'w'
    with pytest.raises(DomainError):
        c4.scaled(0.)


def test_power_transform():
    kernel = power_transform(c4, 2)
    assert kernel.psi[0, 2] == 4.
    assert kernel.psi[0, 1] == 1.
    kernel = power_transform(c4, 0.5)
    assert kernel.psi[0, 2] == pytest.approx(np.sqrt(2.))
    with pytest.raises(DomainError):
        power_transform(c4, 0.)
    with pytest.raises(DomainError):
        power_transform(c4, -1.)


def test_power_transform_large_integers():
    points = np.arange(300)
    line = FiniteMetricSpace(np.abs(np.subtract.outer(points, points)))
    assert line.is_integral
    psi = power_transform(line, 8).psi
    assert psi.min() == 0.
    assert psi[0, 298] == pytest.approx(298. ** 8, rel=1e-12)
    assert psi[0, 299] == pytest.approx(299. ** 8, rel=1e-12)
    # Below 2**53 the integer path stays exact
    assert power_transform(line, 2).psi[0, 299] == 299 ** 2


def test_root_transform():
    dist = root_transform(power_transform(c4, 2.5), 2.5)
    assert np.allclose(dist, c4.dist, rtol=0., atol=1e-12)


def test_kernel_checks():
    with pytest.raises(DomainError):
        Kernel([[0., 1.], [2., 0.]])
    with pytest.raises(DomainError):
        Kernel([[1., 1.], [1., 0.]])
    with pytest.raises(StructuralError):
        Kernel([[0., 1.]])
    assert Kernel([[0., -3.], [-3., 0.]]).norm == 3.


def test_restrict():
    sub = restrict(c4, [0, 2])
    assert sub.labels == ('a', 'c')
    assert sub.int_dist.tolist() == [[0, 2], [2, 0]]
    with pytest.raises(DomainError):
        restrict(c4, [0, 0])
    with pytest.raises(DomainError):
        restrict(c4, [0, 4])
