#!/usr/bin/env python
#  -*- coding: utf-8 -*-

import math

import numpy as np
import pytest

from roundlab.metric import FiniteMetricSpace, power_transform
from roundlab.negative_type import (is_negative_type, supremal_p, gram_from_kernel, gns_embed, quadratic_form,
                                    brute_force_extremal, is_invariant, compression_lower_bound,
                                    NegTypeCertificate, PStarResult, EuclideanConfiguration)
from roundlab.generators import cycle, path, equilateral, load_graph
from roundlab.exceptions import NotNegativeTypeError, DomainError, MetricError

_, c4 = cycle(4)
_, p3 = path(3)
_, k3 = equilateral(3)
_, star = load_graph([(0, 1), (0, 2), (0, 3)])
two_points = FiniteMetricSpace([[0., 3.], [3., 0.]])


def test_c4_negative_type():
    assert is_negative_type(power_transform(c4, 1)).is_negative_type

    certificate = is_negative_type(power_transform(c4, 2))
    assert not certificate.is_negative_type
    assert certificate.extremal_value == pytest.approx(2.)
    assert np.allclose(certificate.witness, [0.5, -0.5, 0.5, -0.5], atol=1e-9)


def test_witness_normalization():
    certificate = is_negative_type(power_transform(p3, 2.5))
    lam = certificate.witness
    assert lam.sum() == pytest.approx(0., abs=1e-12)
    assert np.linalg.norm(lam) == pytest.approx(1.)
    assert lam[0] > 0.
    assert quadratic_form(power_transform(p3, 2.5), lam) == pytest.approx(certificate.extremal_value)


def test_small_kernels():
    assert is_negative_type([[0.]]).is_negative_type
    assert is_negative_type(np.zeros((0, 0))).is_negative_type
    with pytest.raises(DomainError):
        is_negative_type([[0., 1.], [1., 0.]], tol=0.)


def test_exact_values():
    result = supremal_p(p3)
    assert result.p_star == pytest.approx(2., abs=1e-4)
    assert not result.capped
    assert result.lower_certificate.is_negative_type
    assert not result.upper_certificate.is_negative_type
    assert np.allclose(result.upper_certificate.witness, np.array([1., -2., 1.]) / math.sqrt(6.), atol=1e-3)

    result = supremal_p(c4)
    assert result.p_star == pytest.approx(1., abs=1e-4)
    assert np.allclose(result.upper_certificate.witness, [0.5, -0.5, 0.5, -0.5], atol=1e-3)

    result = supremal_p(star)
    assert result.p_star == pytest.approx(math.log(3., 2), abs=1e-4)


def test_shrunk_and_stretched_spaces():
    reference = supremal_p(p3)
    for factor in (0.5, 0.1, 0.01, 1e-4, 1e3):
        result = supremal_p(p3.scaled(factor))
        assert not result.capped, factor
        assert abs(result.p_star - reference.p_star) <= 2. * reference.tol


def test_capped():
    for space in (two_points, k3):
        result = supremal_p(space)
        assert result.capped
        assert result.p_star == 8.
        assert result.upper_certificate is None
        assert result.lower_certificate.is_negative_type

    result = supremal_p(two_points, p_max=3.)
    assert result.p_star == 3.


def test_supremal_p_rejections():
    forced = FiniteMetricSpace([[0, 1, 5], [1, 0, 1], [5, 1, 0]], force=True)
    with pytest.raises(MetricError):
        supremal_p(forced)
    with pytest.raises(DomainError):
        supremal_p(c4, tol=0.)
    with pytest.raises(DomainError):
        supremal_p(c4, p_max=-1.)


def test_result_serialization():
    result = supremal_p(p3)
    data = result.as_dict()
    assert data['compression_lower_bound'] == pytest.approx(1., abs=1e-4)
    loaded = PStarResult.from_dict(data)
    assert loaded.p_star == result.p_star
    assert np.array_equal(loaded.upper_certificate.witness, result.upper_certificate.witness)

    certificate = NegTypeCertificate.from_dict(result.lower_certificate.as_dict())
    assert certificate.is_negative_type
    assert certificate.witness is None


def test_gram_matrix():
    gram = gram_from_kernel(power_transform(c4, 1), basepoint=0)
    assert np.all(gram[0] == 0.)
    assert gram[2, 2] == 2.
    assert gram[1, 3] == 0.
    with pytest.raises(DomainError):
        gram_from_kernel(power_transform(c4, 1), basepoint=4)


def test_gns_embed():
    kernel = power_transform(c4, 1)
    configuration = gns_embed(kernel, basepoint=1)
    assert configuration.reconstruction_error(kernel) < 1e-8
    assert np.all(configuration.points[1] == 0.)
    assert configuration.nb_points == 4
    assert configuration.dimension <= 3

    loaded = EuclideanConfiguration.from_dict(configuration.as_dict())
    assert np.array_equal(loaded.points, configuration.points)


def test_gns_of_zero_kernel():
    configuration = gns_embed(np.zeros((3, 3)))
    assert configuration.points.shape == (3, 0)
    assert configuration.reconstruction_error(np.zeros((3, 3))) == 0.


def test_gns_rejection():
    with pytest.raises(NotNegativeTypeError) as err:
        gns_embed(power_transform(c4, 2))
    assert err.value.eigenvalue < 0.


def test_brute_force_oracle():
    kernel = power_transform(c4, 2)
    value, lam = brute_force_extremal(kernel, samples=100000, seed=3)
    extremal = is_negative_type(kernel).extremal_value
    assert value <= extremal + 1e-9
    assert value > 0.95 * extremal
    assert lam.sum() == pytest.approx(0., abs=1e-9)


def test_invariance():
    kernel = power_transform(c4, 1.5)
    assert is_invariant(kernel, [1, 2, 3, 0])
    assert is_invariant(kernel, [3, 2, 1, 0])
    assert not is_invariant(kernel, [1, 0, 2, 3])
    with pytest.raises(DomainError):
        is_invariant(kernel, [0, 0, 1, 2])


def test_compression_lower_bound():
    assert compression_lower_bound(2.) == 1.
    with pytest.raises(DomainError):
        compression_lower_bound(-1.)
