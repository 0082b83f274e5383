#!/usr/bin/env python
#  -*- coding: utf-8 -*-

import numpy as np
import pytest

from roundlab.metric import is_isometric
from roundlab.generators import hypercube, path, cycle, grid, free_group_ball, zn_ball, load_graph
from roundlab.cubical import (theta_classes, separation_count, halfspace_embedding, embedding_to_space,
                              verify_isometry, spot_check_convexity, orbit_metric, zn_orbit_map, L1Embedding)
from roundlab.exceptions import NotCubicalError, DomainError, StructuralError

cube_graph, cube = hypercube(3)
cube_hps = theta_classes(cube_graph)


def test_hypercube_classes():
    assert cube_hps.nb_classes == 3
    assert [len(edges) for edges in cube_hps.classes] == [4, 4, 4]
    assert cube_hps.nb_vertices == 8
    for h in range(3):
        side0, side1 = cube_hps.halfspaces(h)
        assert 0 in side0
        assert len(side0) == len(side1) == 4
        assert side0.isdisjoint(side1)

    origin = cube.index('(0, 0, 0)')
    opposite = cube.index('(1, 1, 1)')
    assert separation_count(cube_hps, origin, opposite) == 3
    assert separation_count(cube_hps, origin, origin) == 0
    with pytest.raises(DomainError):
        separation_count(cube_hps, 0, 8)


def test_class_of_edge():
    for (h, edges) in enumerate(cube_hps.classes):
        for (u, v) in edges:
            assert cube_hps.class_of_edge(u, v) == h
            assert cube_hps.class_of_edge(v, u) == h
            assert cube_hps.separates(h, u, v)
    with pytest.raises(DomainError):
        cube_hps.class_of_edge(0, 7)


def test_class_counts():
    graph, _ = path(5)
    assert theta_classes(graph).nb_classes == 4
    graph, _ = cycle(4)
    assert [len(edges) for edges in theta_classes(graph).classes] == [2, 2]
    graph, _ = grid([3, 3])
    assert sorted(len(edges) for edges in theta_classes(graph).classes) == [3, 3, 3, 3]
    graph, _ = free_group_ball(2, 2)
    assert theta_classes(graph).nb_classes == 16


def test_non_cubical_graphs():
    graph, _ = cycle(6)
    with pytest.raises(NotCubicalError) as err:
        theta_classes(graph)
    assert err.value.class_id == 0

    k23, _ = load_graph([(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)])
    with pytest.raises(NotCubicalError):
        theta_classes(k23)

    graph, _ = cycle(5)
    with pytest.raises(NotCubicalError):
        theta_classes(graph)


def test_halfspace_embedding():
    embedding = halfspace_embedding(cube_graph, cube_hps, basepoint=5)
    assert embedding.basepoint == 5
    assert np.all(embedding.vectors[5] == 0)
    assert embedding.dimension == 3
    assert embedding.labels == cube.labels
    report = verify_isometry(embedding, cube)
    assert report.passed
    assert report.nb_pairs == 28
    assert is_isometric(embedding_to_space(embedding), cube)

    with pytest.raises(DomainError):
        halfspace_embedding(cube_graph, cube_hps, basepoint=8)


def test_isometry_on_families():
    for graph, space in (path(12), grid([4, 3]), free_group_ball(2, 3), zn_ball(1, 5)):
        hps = theta_classes(graph)
        report = verify_isometry(halfspace_embedding(graph, hps), space)
        assert report.passed, str(report)


def test_verify_isometry_failures():
    vectors = halfspace_embedding(cube_graph, cube_hps).vectors.copy()
    vectors[:, 2] = 0
    report = verify_isometry(L1Embedding(0, vectors), cube)
    assert not report.passed
    assert not report
    assert len(report.failures) == 16
    v, w, l1, d = report.failures[0]
    assert l1 == d - 1
    assert report.as_dict()['passed'] is False

    _, c4 = cycle(4)
    with pytest.raises(StructuralError):
        verify_isometry(L1Embedding(0, vectors), c4)


def test_embedding_serialization():
    embedding = halfspace_embedding(cube_graph, cube_hps)
    data = embedding.as_dict()
    assert data['classes'] == [0, 1, 2]
    assert data['vectors'][0] == []
    assert sorted(len(support) for support in data['vectors']) == [0, 1, 1, 1, 2, 2, 2, 3]
    loaded = L1Embedding.from_dict(data)
    assert np.array_equal(loaded.vectors, embedding.vectors)
    assert loaded.labels == embedding.labels


def test_spot_check_convexity():
    assert spot_check_convexity(cube_graph, cube_hps, samples=50, seed=3) is None


def test_zn_orbit_metric():
    _, ball = zn_ball(2, 2)
    orbit = zn_orbit_map(2, 2, ball)
    assert len(orbit) == 13
    elements = [element for (element, _) in orbit]
    assert 'e' in elements
    assert 'a*b^-1' in elements
    assert 'a^2' in elements

    metric = orbit_metric(orbit, ball)
    assert metric.nb_points == 13
    assert metric.int_dist[metric.index('e'), metric.index('a*b^-1')] == 2
    assert metric.int_dist[metric.index('a^-2'), metric.index('a^2')] == 4

    shifted = zn_orbit_map(2, 1, ball, basepoint=(1, 0))
    assert len(shifted) == 5
    assert dict(shifted)['e'] == ball.index('(1, 0)')


def test_orbit_metric_rejections():
    _, ball = zn_ball(2, 1)
    with pytest.raises(DomainError):
        orbit_metric([('e', 0), ('a', 0)], ball)
    with pytest.raises(DomainError):
        orbit_metric([('e', 0), ('a', 7)], ball)

    metric = orbit_metric([('e', '(0, 0)'), ('a', '(1, 0)')], ball)
    assert metric.int_dist[0, 1] == 1
    with pytest.raises(DomainError):
        zn_orbit_map(2, 1, ball, basepoint=(0,))
